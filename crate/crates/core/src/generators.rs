//! Instance generators: structured families built from number-partitioning,
//! set-cover and clique sources, plus seeded random instances.
//!
//! The structured families embed a source problem so that the generated
//! instance is a yes-instance exactly when the source is; sources small
//! enough for the brute-force oracle can be cross-validated end to end,
//! larger ones are checked structurally (clique counts, parameter formulas,
//! the tight-budget identity, and explicit forward witnesses).

use crate::distance::graph_cluster_edge_distance;
use crate::graph::{cluster_to_graph, ClusterGraph, Graph};
use crate::instance::{Instance, Measure, Solution, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("invalid source: {0}")]
    InvalidSource(String),
}

fn invalid(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::InvalidSource(msg.into())
}

// ---------------------------------------------------------------------------
// Number partitioning -> completion / edge distance
// ---------------------------------------------------------------------------

/// A 3-partition source: `3m` positive integers summing to `m * b`, each
/// strictly between `b/4` and `b/2` (so any group summing to `b` has exactly
/// three members).
#[derive(Debug, Clone)]
pub struct ThreePartitionSource {
    pub m: usize,
    pub b: u64,
    pub a: Vec<u64>,
}

impl ThreePartitionSource {
    pub fn new(m: usize, b: u64, a: Vec<u64>) -> Result<Self, GeneratorError> {
        if m == 0 || b == 0 {
            return Err(invalid("m and b must be positive"));
        }
        if a.len() != 3 * m {
            return Err(invalid(format!(
                "expected {} numbers, got {}",
                3 * m,
                a.len()
            )));
        }
        if a.iter().sum::<u64>() != m as u64 * b {
            return Err(invalid("numbers must sum to m * b"));
        }
        // Strict bounds; boundary values are rejected.
        if a.iter().any(|&x| 4 * x <= b || 2 * x >= b) {
            return Err(invalid(
                "every number must satisfy b/4 < a_i < b/2 strictly",
            ));
        }
        Ok(ThreePartitionSource { m, b, a })
    }

    /// Size of the big cliques: 4 * (m * b)^2.
    pub fn big_clique_size(&self) -> u64 {
        let mb = self.m as u64 * self.b;
        4 * mb * mb
    }
}

/// Builds the completion / edge-distance instance: `m` big cliques of size
/// `M = 4(mb)^2` and one small clique of size `a_i` per number; the target
/// is the complete graph. Solving it groups the small cliques in triples of
/// total size `b` around the big cliques, i.e. solves the source.
pub fn gen_3partition_completion_edge(
    src: &ThreePartitionSource,
) -> Result<Instance, GeneratorError> {
    let m_big = src.big_clique_size() as usize;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut next = 0usize;
    for _ in 0..src.m {
        clusters.push((next..next + m_big).collect());
        next += m_big;
    }
    for &ai in &src.a {
        clusters.push((next..next + ai as usize).collect());
        next += ai as usize;
    }
    let n = next;
    let g = cluster_to_graph(
        &ClusterGraph::from_clusters(n, clusters).expect("generated blocks partition the vertices"),
    );
    let gc = ClusterGraph::from_clusters(n, vec![(0..n).collect()]).expect("one full cluster");
    let sum_sq: u64 = src.a.iter().map(|&x| x * x).sum();
    let m = src.m as u64;
    let k = m * src.big_clique_size() * src.b + (m * src.b * src.b - sum_sq) / 2;
    let total = graph_cluster_edge_distance(&g, &gc);
    if total < k {
        return Err(invalid("budget exceeds the total completion cost"));
    }
    let d = total - k;
    Ok(Instance::new(
        Variant::Completion,
        Measure::EdgeDist,
        g,
        gc,
        k as i64,
        d as i64,
    )
    .expect("consistent sizes"))
}

/// The explicit witness for a yes-source: `grouping` partitions the number
/// indices `0..3m` into triples, each summing to `b`; group `i`'s small
/// cliques merge with big clique `i`.
pub fn forward_witness_3partition(
    src: &ThreePartitionSource,
    inst: &Instance,
    grouping: &[[usize; 3]],
) -> Result<Solution, GeneratorError> {
    if grouping.len() != src.m {
        return Err(invalid("grouping must have one triple per big clique"));
    }
    let mut seen = BTreeSet::new();
    for triple in grouping {
        if triple.iter().any(|&i| i >= 3 * src.m || !seen.insert(i)) {
            return Err(invalid("grouping must partition the number indices"));
        }
        if triple.iter().map(|&i| src.a[i]).sum::<u64>() != src.b {
            return Err(invalid("every triple must sum to b"));
        }
    }
    let m_big = src.big_clique_size() as usize;
    let small_offset: Vec<usize> = src
        .a
        .iter()
        .scan(src.m * m_big, |acc, &ai| {
            let start = *acc;
            *acc += ai as usize;
            Some(start)
        })
        .collect();
    let mut clusters = Vec::with_capacity(src.m);
    for (big, triple) in grouping.iter().enumerate() {
        let mut cluster: Vec<usize> = (big * m_big..(big + 1) * m_big).collect();
        for &i in triple {
            cluster.extend(small_offset[i]..small_offset[i] + src.a[i] as usize);
        }
        clusters.push(cluster);
    }
    let gprime = ClusterGraph::from_clusters(inst.n(), clusters)
        .expect("witness clusters partition the vertices");
    Ok(Solution::new(&inst.g, gprime).expect("matching vertex count"))
}

// ---------------------------------------------------------------------------
// Exact cover by 3-sets -> deletion / matching distance
// ---------------------------------------------------------------------------

/// An exact-cover source: a ground set of `3q` elements and a collection of
/// 3-element subsets, at least `q` of them.
#[derive(Debug, Clone)]
pub struct X3cSource {
    pub q: usize,
    pub sets: Vec<[usize; 3]>,
}

impl X3cSource {
    pub fn new(q: usize, sets: Vec<[usize; 3]>) -> Result<Self, GeneratorError> {
        if q == 0 {
            return Err(invalid("q must be positive"));
        }
        if sets.len() < q {
            return Err(invalid("need at least q sets"));
        }
        for set in &sets {
            if set[0] >= set[1] || set[1] >= set[2] {
                return Err(invalid(
                    "each set must list three distinct ascending elements",
                ));
            }
            if set[2] >= 3 * q {
                return Err(invalid("element out of range"));
            }
        }
        Ok(X3cSource { q, sets })
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// Brute-force decision of the source itself.
    pub fn has_exact_cover(&self) -> bool {
        fn go(src: &X3cSource, idx: usize, chosen: usize, covered: u64) -> bool {
            if chosen == src.q {
                return covered.count_ones() as usize == 3 * src.q;
            }
            if idx == src.sets.len() {
                return false;
            }
            let mask: u64 = src.sets[idx].iter().fold(0, |m, &x| m | (1 << x));
            if covered & mask == 0 && go(src, idx + 1, chosen + 1, covered | mask) {
                return true;
            }
            go(src, idx + 1, chosen, covered)
        }
        debug_assert!(3 * self.q <= 64);
        go(self, 0, 0, 0)
    }
}

/// Vertex ids of set `i`'s clique: two anchor vertices followed by one copy
/// vertex per element, in ascending element order.
fn x3c_clique_base(i: usize) -> usize {
    5 * i
}

/// Builds the deletion / matching-distance instance: one 5-clique per set
/// (two anchors plus three element copies). The target keeps each anchor
/// pair together and groups all copies of an element; budget `9q` pays for
/// shattering exactly `q` cliques, and the distance bound `3m - 3q` is met
/// exactly when the shattered cliques form an exact cover.
pub fn gen_x3c_deletion_matching(src: &X3cSource) -> Result<Instance, GeneratorError> {
    let m = src.m();
    let n = 5 * m;
    let mut g_clusters = Vec::with_capacity(m);
    let mut gc_clusters: Vec<Vec<usize>> = Vec::with_capacity(m + 3 * src.q);
    let mut element_copies: Vec<Vec<usize>> = vec![Vec::new(); 3 * src.q];
    for (i, set) in src.sets.iter().enumerate() {
        let base = x3c_clique_base(i);
        g_clusters.push((base..base + 5).collect::<Vec<_>>());
        gc_clusters.push(vec![base, base + 1]);
        for (slot, &x) in set.iter().enumerate() {
            element_copies[x].push(base + 2 + slot);
        }
    }
    for copies in element_copies {
        if !copies.is_empty() {
            gc_clusters.push(copies);
        }
    }
    let g =
        cluster_to_graph(&ClusterGraph::from_clusters(n, g_clusters).expect("disjoint cliques"));
    let gc = ClusterGraph::from_clusters(n, gc_clusters).expect("target partition");
    let k = 9 * src.q as i64;
    let d = 3 * m as i64 - 3 * src.q as i64;
    if d < 0 {
        return Err(invalid("need at least q sets"));
    }
    Ok(
        Instance::new(Variant::Deletion, Measure::MatchingDist, g, gc, k, d)
            .expect("consistent sizes"),
    )
}

/// The explicit witness for a yes-source: shatter the cliques of the cover
/// into the anchor pair plus three singletons.
pub fn forward_witness_x3c(
    src: &X3cSource,
    inst: &Instance,
    cover: &[usize],
) -> Result<Solution, GeneratorError> {
    if cover.len() != src.q {
        return Err(invalid("cover must contain exactly q set indices"));
    }
    let mut covered = BTreeSet::new();
    for &i in cover {
        if i >= src.m() {
            return Err(invalid("set index out of range"));
        }
        for &x in &src.sets[i] {
            if !covered.insert(x) {
                return Err(invalid("cover is not exact: element covered twice"));
            }
        }
    }
    if covered.len() != 3 * src.q {
        return Err(invalid("cover misses elements"));
    }
    let chosen: BTreeSet<usize> = cover.iter().copied().collect();
    let mut clusters = Vec::new();
    for i in 0..src.m() {
        let base = x3c_clique_base(i);
        if chosen.contains(&i) {
            clusters.push(vec![base, base + 1]);
            for slot in 0..3 {
                clusters.push(vec![base + 2 + slot]);
            }
        } else {
            clusters.push((base..base + 5).collect());
        }
    }
    let gprime =
        ClusterGraph::from_clusters(inst.n(), clusters).expect("witness clusters are a partition");
    Ok(Solution::new(&inst.g, gprime).expect("matching vertex count"))
}

// ---------------------------------------------------------------------------
// Clique -> editing / edge distance
// ---------------------------------------------------------------------------

/// A clique-search source: does `g0` contain a clique of `ell` vertices?
#[derive(Debug, Clone)]
pub struct CliqueSource {
    pub g0: Graph,
    pub ell: u64,
}

impl CliqueSource {
    /// The construction assumes `ell >= 3`.
    pub fn new(g0: Graph, ell: u64) -> Result<Self, GeneratorError> {
        if ell < 3 {
            return Err(invalid("ell must be at least 3"));
        }
        Ok(CliqueSource { g0, ell })
    }

    pub fn l1(&self) -> u64 {
        self.ell.pow(7) + 1
    }

    pub fn l2(&self) -> u64 {
        self.ell * self.ell
    }

    /// The editing budget: shatter `ell` vertex cliques and C(ell,2) edge
    /// cliques, then reassemble the freed vertices around the members.
    pub fn budget(&self) -> u64 {
        let (ell, l1, l2) = (self.ell, self.l1(), self.l2());
        let choose2 = |x: u64| x * x.saturating_sub(1) / 2;
        ell * l1 + ell * (ell - 1) * l2 + ell * choose2(ell - 1) * l2 * l2 + choose2(ell) * l2 * l2
    }
}

/// Builds the editing / edge-distance instance. Per source vertex a clique
/// of `L1 + 1` vertices (body plus a single splittable vertex), per source
/// edge a clique of `2 L2` vertices split between its endpoints' target
/// clusters. The parameters satisfy `k + d = |E(G) ⊕ E(G_c)|`, so any
/// solution modifies exactly `k` edges inside the symmetric difference.
pub fn gen_clique_editing_edge(src: &CliqueSource) -> Result<Instance, GeneratorError> {
    let n0 = src.g0.n();
    let l1 = src.l1() as usize;
    let l2 = src.l2() as usize;
    let vertex_block = l1 + 1;
    let edges0: Vec<(usize, usize)> = src.g0.edges().collect();
    let n = n0 * vertex_block + edges0.len() * 2 * l2;

    let mut g_clusters: Vec<Vec<usize>> = Vec::new();
    // Target clusters per source vertex: the body, and the single vertex's
    // cluster collecting one half of every incident edge clique.
    let mut body_clusters: Vec<Vec<usize>> = Vec::with_capacity(n0);
    let mut single_clusters: Vec<Vec<usize>> = Vec::with_capacity(n0);
    for v in 0..n0 {
        let base = v * vertex_block;
        g_clusters.push((base..base + vertex_block).collect());
        body_clusters.push((base..base + l1).collect());
        single_clusters.push(vec![base + l1]);
    }
    let edge_base = n0 * vertex_block;
    for (i, &(u, v)) in edges0.iter().enumerate() {
        let base = edge_base + i * 2 * l2;
        g_clusters.push((base..base + 2 * l2).collect());
        single_clusters[u].extend(base..base + l2);
        single_clusters[v].extend(base + l2..base + 2 * l2);
    }
    let g = cluster_to_graph(
        &ClusterGraph::from_clusters(n, g_clusters).expect("generated blocks partition"),
    );
    let gc = ClusterGraph::from_clusters(
        n,
        body_clusters.into_iter().chain(single_clusters).collect(),
    )
    .expect("target partition");

    let k = src.budget();
    let total = graph_cluster_edge_distance(&g, &gc);
    if total < k {
        return Err(invalid("budget exceeds the total symmetric difference"));
    }
    let d = total - k;
    Ok(Instance::new(
        Variant::Editing,
        Measure::EdgeDist,
        g,
        gc,
        k as i64,
        d as i64,
    )
    .expect("consistent sizes"))
}

// ---------------------------------------------------------------------------
// Multicolored clique -> deletion / edge distance
// ---------------------------------------------------------------------------

/// A multicolored-clique source: a graph with a total coloring `1..=ell`
/// and no monochromatic edge, asking for a clique with one vertex per
/// color.
#[derive(Debug, Clone)]
pub struct McCliqueSource {
    pub g0: Graph,
    pub coloring: Vec<usize>,
    pub ell: u64,
}

impl McCliqueSource {
    pub fn new(g0: Graph, coloring: Vec<usize>, ell: u64) -> Result<Self, GeneratorError> {
        if ell == 0 {
            return Err(invalid("ell must be positive"));
        }
        if coloring.len() != g0.n() {
            return Err(invalid("coloring must assign a color to every vertex"));
        }
        if coloring.iter().any(|&c| c == 0 || c as u64 > ell) {
            return Err(invalid("colors must lie in 1..=ell"));
        }
        // With no monochromatic edges, every ell-clique is automatically
        // multicolored, which the construction's correctness relies on.
        if g0.edges().any(|(u, v)| coloring[u] == coloring[v]) {
            return Err(invalid("monochromatic edges are not allowed"));
        }
        Ok(McCliqueSource { g0, coloring, ell })
    }
}

/// Builds the deletion / edge-distance instance: a `2 ell`-clique per source
/// vertex, a universal extra vertex, and full bipartite connections per
/// source edge. Parameters satisfy `k + d = |E(G) ⊕ E(G_c)|`; keeping the
/// universal vertex together with `ell` pairwise-connected vertex cliques is
/// the only way to spend the distance allowance.
pub fn gen_mcclique_deletion_edge(src: &McCliqueSource) -> Result<Instance, GeneratorError> {
    let n0 = src.g0.n();
    let ell = src.ell as usize;
    let block = 2 * ell;
    let star = n0 * block; // the universal vertex
    let n = star + 1;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut gc_clusters: Vec<Vec<usize>> = Vec::with_capacity(n0 + 1);
    for v in 0..n0 {
        let base = v * block;
        gc_clusters.push((base..base + block).collect());
        for i in base..base + block {
            for j in i + 1..base + block {
                edges.push((i, j));
            }
        }
    }
    gc_clusters.push(vec![star]);
    for v in 0..star {
        edges.push((v, star));
    }
    for (u, v) in src.g0.edges() {
        for i in u * block..(u + 1) * block {
            for j in v * block..(v + 1) * block {
                edges.push((i, j));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("generated edges are valid");
    let gc = ClusterGraph::from_clusters(n, gc_clusters).expect("target partition");
    let ell_u = src.ell;
    let d = 2 * ell_u * ell_u + 4 * ell_u * ell_u * (ell_u * (ell_u - 1) / 2);
    let total = graph_cluster_edge_distance(&g, &gc);
    if total < d {
        return Err(invalid(
            "distance allowance exceeds the total symmetric difference",
        ));
    }
    let k = total - d;
    Ok(Instance::new(
        Variant::Deletion,
        Measure::EdgeDist,
        g,
        gc,
        k as i64,
        d as i64,
    )
    .expect("consistent sizes"))
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

/// Seeded random instance: an Erdős–Rényi graph and a uniformly assigned
/// random target partition. Deterministic for a fixed seed.
pub fn gen_random(
    n: usize,
    edge_prob: f64,
    variant: Variant,
    measure: Measure,
    k: i64,
    d: i64,
    seed: u64,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_prob.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("generated edges are valid");
    let gc = random_partition(n, &mut rng);
    Instance::new(variant, measure, g, gc, k, d).expect("consistent sizes")
}

/// A random partition of `0..n`: pick a cluster count, assign uniformly.
pub fn random_partition(n: usize, rng: &mut impl Rng) -> ClusterGraph {
    if n == 0 {
        return ClusterGraph::from_clusters(0, vec![]).expect("empty partition");
    }
    let buckets = rng.gen_range(1..=n);
    let assign: Vec<usize> = (0..n).map(|_| rng.gen_range(0..buckets)).collect();
    ClusterGraph::from_assignment(&assign)
}

/// A random cluster graph on `n` vertices (as a graph), for tests that need
/// cluster-graph inputs.
pub fn random_cluster_graph(n: usize, rng: &mut impl Rng) -> Graph {
    cluster_to_graph(&random_partition(n, rng))
}
