//! Data reduction rules and the exhaustive kernelization driver.
//!
//! Nine rule flavors reduce any instance to an equivalent one whose vertex
//! count is bounded by a polynomial in `k + d`, or decide it outright:
//!
//! * RR1: negative budget or distance is infeasible.
//! * RR2/RR3: a pair lying in `k+1` induced P3s must be edited (or the
//!   instance is infeasible when the variant forbids that edit).
//! * RR4: more than `k^2 + 2k` vertices in P3s is infeasible.
//! * RR5: a clique isolated in both graphs can be dropped.
//! * RR6: a large isolated clique is resolved against its best-overlapping
//!   target cluster (matching distance) or charged against `d` and dropped
//!   (edge distance).
//! * RR7: too many isolated cliques is infeasible.
//!
//! Rules are tried in ascending number; every trigger search is resolved by
//! the lexicographically smallest witness, so traces are deterministic and
//! replayable through [`apply_rule`].

use crate::graph::{ClusterGraph, Graph};
use crate::instance::{Instance, Measure, Variant};
use std::collections::{BTreeMap, BTreeSet};

/// Identifies a reduction rule flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    Rr1Trivial,
    Rr2HeavyEdge,
    Rr3HeavyNonEdge,
    Rr4P3VertexBound,
    Rr5SameClique,
    Rr6LargeCliqueMatching,
    Rr6LargeCliqueEdge,
    Rr7ManyCliquesMatching,
    Rr7ManyCliquesEdge,
}

impl RuleId {
    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::Rr1Trivial => "RR1_Trivial",
            RuleId::Rr2HeavyEdge => "RR2_HeavyEdge",
            RuleId::Rr3HeavyNonEdge => "RR3_HeavyNonEdge",
            RuleId::Rr4P3VertexBound => "RR4_P3VertexBound",
            RuleId::Rr5SameClique => "RR5_SameClique",
            RuleId::Rr6LargeCliqueMatching => "RR6_LargeCliqueMatching",
            RuleId::Rr6LargeCliqueEdge => "RR6_LargeCliqueEdge",
            RuleId::Rr7ManyCliquesMatching => "RR7_ManyCliquesMatching",
            RuleId::Rr7ManyCliquesEdge => "RR7_ManyCliquesEdge",
        }
    }

    /// Whether the rule may be tried on instances of the given measure.
    /// RR6/RR7 exist in exactly one measure flavor each; all other rules
    /// apply to both measures (their action may depend on the variant).
    pub fn admissible(&self, measure: Measure) -> bool {
        match self {
            RuleId::Rr6LargeCliqueMatching | RuleId::Rr7ManyCliquesMatching => {
                measure == Measure::MatchingDist
            }
            RuleId::Rr6LargeCliqueEdge | RuleId::Rr7ManyCliquesEdge => measure == Measure::EdgeDist,
            _ => true,
        }
    }

    /// The rules applicable to a measure, in application priority order.
    pub fn priority_order(measure: Measure) -> Vec<RuleId> {
        let (rr6, rr7) = match measure {
            Measure::MatchingDist => (
                RuleId::Rr6LargeCliqueMatching,
                RuleId::Rr7ManyCliquesMatching,
            ),
            Measure::EdgeDist => (RuleId::Rr6LargeCliqueEdge, RuleId::Rr7ManyCliquesEdge),
        };
        vec![
            RuleId::Rr1Trivial,
            RuleId::Rr2HeavyEdge,
            RuleId::Rr3HeavyNonEdge,
            RuleId::Rr4P3VertexBound,
            RuleId::Rr5SameClique,
            rr6,
            rr7,
        ]
    }
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One rule application. `removed` lists vertices in the ids of the rule's
/// input instance; `added` lists fresh vertices in the ids of the output
/// instance (vertex removals renumber the survivors, preserving order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: RuleId,
    pub effect: String,
    pub dk: i64,
    pub dd: i64,
    pub removed: Vec<usize>,
    pub added: Vec<usize>,
}

impl TraceEntry {
    fn event(rule: RuleId, effect: String) -> Self {
        TraceEntry {
            rule,
            effect,
            dk: 0,
            dd: 0,
            removed: Vec::new(),
            added: Vec::new(),
        }
    }
}

/// Result of trying one rule on an instance.
#[derive(Debug, Clone)]
pub enum RuleOutcome {
    /// The rule has no trigger on this instance.
    NotApplicable,
    /// The rule proves the instance infeasible.
    No(TraceEntry),
    /// The rule rewrote the instance into an equivalent one.
    Applied(Instance, TraceEntry),
}

/// Outcome of exhaustive kernelization.
#[derive(Debug, Clone)]
pub enum KernelOutcome {
    /// Equivalent instance on which no rule applies. Vertex counts obey the
    /// measure-specific kernel bound for the residual parameters.
    Reduced(Instance),
    /// Definitive no, with the rule that proved it.
    No(RuleId),
}

#[derive(Debug, Clone)]
pub struct KernelResult {
    pub outcome: KernelOutcome,
    pub trace: Vec<TraceEntry>,
}

impl KernelResult {
    pub fn is_no(&self) -> bool {
        matches!(self.outcome, KernelOutcome::No(_))
    }
}

/// Target vertex bound for a fully reduced instance with residual
/// parameters `k, d >= 0`: `3k^2 + 2d^2 + 5dk + 2d + 6k` for the matching
/// measure and `2dk + 2d + 3k^2 + 4k` for the edge measure.
pub fn kernel_vertex_bound(measure: Measure, k: i64, d: i64) -> i64 {
    let kk = k.saturating_mul(k);
    let dd = d.saturating_mul(d);
    let dk = d.saturating_mul(k);
    let sum = |xs: [i64; 5]| xs.iter().fold(0i64, |a, &x| a.saturating_add(x));
    match measure {
        Measure::MatchingDist => sum([
            3i64.saturating_mul(kk),
            2i64.saturating_mul(dd),
            5i64.saturating_mul(dk),
            2 * d,
            6 * k,
        ]),
        Measure::EdgeDist => sum([
            2i64.saturating_mul(dk),
            2 * d,
            3i64.saturating_mul(kk),
            4 * k,
            0,
        ]),
    }
}

/// Vertex bound the implemented rules guarantee by construction: at most
/// `k^2 + 2k` P3 vertices plus at most `2(k+d)` isolated cliques of size at
/// most `k + 2d + 2` (matching) or `k + 1` (edge). For the edge measure
/// this coincides with [`kernel_vertex_bound`]; for the matching measure it
/// is slightly larger because the sound many-cliques threshold is `2(k+d)`
/// rather than `2k + d` (see the module notes on the rule).
pub fn kernel_vertex_bound_structural(measure: Measure, k: i64, d: i64) -> i64 {
    match measure {
        Measure::MatchingDist => k.saturating_mul(k).saturating_add(2 * k).saturating_add(
            (2i64.saturating_mul(k + d)).saturating_mul(k.saturating_add(2 * d).saturating_add(2)),
        ),
        Measure::EdgeDist => kernel_vertex_bound(measure, k, d),
    }
}

// ---------------------------------------------------------------------------
// Single-step rule application.
// ---------------------------------------------------------------------------

/// Components of `g` that are cliques, i.e. the isolated cliques, ordered by
/// smallest vertex.
fn isolated_cliques(g: &Graph) -> Vec<Vec<usize>> {
    g.components()
        .into_iter()
        .filter(|c| {
            let s = c.len();
            c.iter().map(|&v| g.degree(v)).sum::<usize>() == s * (s - 1)
        })
        .collect()
}

/// Is the vertex set `c` (sorted) exactly one cluster of `gc`?
fn is_gc_cluster(c: &[usize], gc: &ClusterGraph) -> bool {
    let id = gc.cluster_of(c[0]);
    gc.cluster(id) == c
}

fn remove_vertices(inst: &Instance, gone: &[usize]) -> (Graph, ClusterGraph, Vec<usize>) {
    let gone_set: BTreeSet<usize> = gone.iter().copied().collect();
    let keep: Vec<usize> = (0..inst.n()).filter(|v| !gone_set.contains(v)).collect();
    (inst.g.induced(&keep), inst.gc.restrict(&keep), keep)
}

fn edit_edge(inst: &Instance, u: usize, v: usize, insert: bool) -> Graph {
    let mut edges: Vec<(usize, usize)> = inst.g.edges().collect();
    if insert {
        edges.push((u, v));
    } else {
        edges.retain(|&e| e != (u, v));
    }
    Graph::from_edges(inst.n(), edges).expect("edited edge list stays valid")
}

/// First edge (if `on_edges`) or non-edge pair lying in at least `k+1`
/// induced P3s, in lexicographic order.
fn heavy_pair(inst: &Instance, on_edges: bool) -> Option<(usize, usize, u64)> {
    let threshold = (inst.k + 1) as u64;
    crate::graph::enumerate_p3_pairs(&inst.g)
        .pairs()
        .find(|&((u, v), c)| c >= threshold && inst.g.has_edge(u, v) == on_edges)
        .map(|((u, v), c)| (u, v, c))
}

fn apply_rr1(inst: &Instance) -> RuleOutcome {
    if inst.k < 0 || inst.d < 0 {
        RuleOutcome::No(TraceEntry::event(
            RuleId::Rr1Trivial,
            format!("infeasible parameters: k = {}, d = {}", inst.k, inst.d),
        ))
    } else {
        RuleOutcome::NotApplicable
    }
}

fn apply_rr2(inst: &Instance) -> RuleOutcome {
    let Some((u, v, count)) = heavy_pair(inst, true) else {
        return RuleOutcome::NotApplicable;
    };
    if inst.variant == Variant::Completion {
        return RuleOutcome::No(TraceEntry::event(
            RuleId::Rr2HeavyEdge,
            format!("edge {{{u},{v}}} lies in {count} induced P3s but deletions are forbidden"),
        ));
    }
    let mut out = inst.clone();
    out.g = edit_edge(inst, u, v, false);
    out.k -= 1;
    RuleOutcome::Applied(
        out,
        TraceEntry {
            rule: RuleId::Rr2HeavyEdge,
            effect: format!("deleted edge {{{u},{v}}} lying in {count} induced P3s"),
            dk: -1,
            dd: 0,
            removed: Vec::new(),
            added: Vec::new(),
        },
    )
}

fn apply_rr3(inst: &Instance) -> RuleOutcome {
    let Some((u, v, count)) = heavy_pair(inst, false) else {
        return RuleOutcome::NotApplicable;
    };
    if inst.variant == Variant::Deletion {
        return RuleOutcome::No(TraceEntry::event(
            RuleId::Rr3HeavyNonEdge,
            format!(
                "non-edge {{{u},{v}}} lies in {count} induced P3s but insertions are forbidden"
            ),
        ));
    }
    let mut out = inst.clone();
    out.g = edit_edge(inst, u, v, true);
    out.k -= 1;
    RuleOutcome::Applied(
        out,
        TraceEntry {
            rule: RuleId::Rr3HeavyNonEdge,
            effect: format!("inserted edge {{{u},{v}}} lying in {count} induced P3s"),
            dk: -1,
            dd: 0,
            removed: Vec::new(),
            added: Vec::new(),
        },
    )
}

fn apply_rr4(inst: &Instance) -> RuleOutcome {
    let count = crate::graph::enumerate_p3_pairs(&inst.g)
        .p3_vertices()
        .len() as i64;
    let bound = inst.k * inst.k + 2 * inst.k;
    if count > bound {
        RuleOutcome::No(TraceEntry::event(
            RuleId::Rr4P3VertexBound,
            format!("{count} vertices lie in induced P3s, more than k^2 + 2k = {bound}"),
        ))
    } else {
        RuleOutcome::NotApplicable
    }
}

fn apply_rr5(inst: &Instance) -> RuleOutcome {
    let Some(clique) = isolated_cliques(&inst.g)
        .into_iter()
        .find(|c| is_gc_cluster(c, &inst.gc))
    else {
        return RuleOutcome::NotApplicable;
    };
    let (g, gc, _) = remove_vertices(inst, &clique);
    let mut out = inst.clone();
    out.g = g;
    out.gc = gc;
    RuleOutcome::Applied(
        out,
        TraceEntry {
            rule: RuleId::Rr5SameClique,
            effect: format!(
                "removed a {}-vertex clique isolated in both graphs",
                clique.len()
            ),
            dk: 0,
            dd: 0,
            removed: clique,
            added: Vec::new(),
        },
    )
}

/// Overlap of `clique` with each cluster of `gc`, as (cluster id, size).
fn cluster_overlaps(clique: &[usize], gc: &ClusterGraph) -> BTreeMap<usize, u64> {
    let mut overlaps = BTreeMap::new();
    for &v in clique {
        *overlaps.entry(gc.cluster_of(v)).or_insert(0) += 1;
    }
    overlaps
}

fn apply_rr6_matching(inst: &Instance) -> RuleOutcome {
    if inst.measure != Measure::MatchingDist {
        return RuleOutcome::NotApplicable;
    }
    let threshold = inst.k + 2 * inst.d + 2;
    let Some(clique) = isolated_cliques(&inst.g)
        .into_iter()
        .find(|c| c.len() as i64 > threshold)
    else {
        return RuleOutcome::NotApplicable;
    };
    // Best-overlapping target cluster, ties by smallest cluster id
    // (clusters are canonically ordered by smallest vertex).
    let overlaps = cluster_overlaps(&clique, &inst.gc);
    let (&target, &overlap) = overlaps
        .iter()
        .max_by_key(|&(&id, &count)| (count, std::cmp::Reverse(id)))
        .expect("clique is non-empty");
    if overlap as i64 <= inst.d {
        return RuleOutcome::No(TraceEntry::event(
            RuleId::Rr6LargeCliqueMatching,
            format!(
                "isolated clique of size {} overlaps every target cluster in at most d = {} vertices",
                clique.len(),
                inst.d
            ),
        ));
    }
    let dd = -(clique.len() as i64 - overlap as i64);
    let new_d = inst.d + dd;
    // Survivors of the matched target cluster, in pre-removal ids.
    let clique_set: BTreeSet<usize> = clique.iter().copied().collect();
    let target_rest: Vec<usize> = inst
        .gc
        .cluster(target)
        .iter()
        .copied()
        .filter(|v| !clique_set.contains(v))
        .collect();
    let (g_red, gc_red, keep) = remove_vertices(inst, &clique);
    let (g, gc, added) = if new_d >= 0 {
        let fresh = (inst.k + new_d + 1) as usize;
        let base = keep.len();
        let mut edges: Vec<(usize, usize)> = g_red.edges().collect();
        for i in 0..fresh {
            for j in i + 1..fresh {
                edges.push((base + i, base + j));
            }
        }
        let g = Graph::from_edges(base + fresh, edges).expect("fresh clique edges are valid");
        // The fresh clique joins the surviving part of the matched cluster.
        let mut clusters: Vec<Vec<usize>> = gc_red.clusters().to_vec();
        let fresh_ids: Vec<usize> = (base..base + fresh).collect();
        if target_rest.is_empty() {
            clusters.push(fresh_ids.clone());
        } else {
            let anchor = keep.binary_search(&target_rest[0]).expect("survivor kept");
            let slot = gc_red.cluster_of(anchor);
            clusters[slot].extend(&fresh_ids);
        }
        let gc = ClusterGraph::from_clusters(base + fresh, clusters)
            .expect("extended clusters stay a partition");
        (g, gc, fresh_ids)
    } else {
        (g_red, gc_red, Vec::new())
    };
    let effect = if added.is_empty() {
        format!(
            "removed isolated clique of size {} (best target overlap {}), distance exhausted",
            clique.len(),
            overlap
        )
    } else {
        format!(
            "removed isolated clique of size {} (best target overlap {}), added fresh clique of size {}",
            clique.len(),
            overlap,
            added.len()
        )
    };
    let mut out = inst.clone();
    out.g = g;
    out.gc = gc;
    out.d = new_d;
    RuleOutcome::Applied(
        out,
        TraceEntry {
            rule: RuleId::Rr6LargeCliqueMatching,
            effect,
            dk: 0,
            dd,
            removed: clique,
            added,
        },
    )
}

/// Distance decrease of the edge-distance large-clique rule: the clique is
/// untouchable by any solution, so dropping it removes exactly the
/// symmetric-difference mass it pins down.
fn rr6_edge_decrement(clique: &[usize], gc: &ClusterGraph) -> i64 {
    let overlaps = cluster_overlaps(clique, gc);
    let pairs = |s: u64| (s * s.saturating_sub(1) / 2) as i64;
    let e_c: i64 = gc.clusters().iter().map(|c| pairs(c.len() as u64)).sum();
    let in_c: i64 = overlaps.values().map(|&c| pairs(c)).sum();
    let outside: i64 = gc
        .clusters()
        .iter()
        .enumerate()
        .map(|(id, c)| pairs(c.len() as u64 - overlaps.get(&id).copied().unwrap_or(0)))
        .sum();
    let s = clique.len() as u64;
    e_c + pairs(s) - 2 * in_c - outside
}

fn apply_rr6_edge(inst: &Instance) -> RuleOutcome {
    if inst.measure != Measure::EdgeDist {
        return RuleOutcome::NotApplicable;
    }
    let Some(clique) = isolated_cliques(&inst.g)
        .into_iter()
        .find(|c| c.len() as i64 > inst.k + 1)
    else {
        return RuleOutcome::NotApplicable;
    };
    let dec = rr6_edge_decrement(&clique, &inst.gc);
    let (g, gc, _) = remove_vertices(inst, &clique);
    let mut out = inst.clone();
    out.g = g;
    out.gc = gc;
    out.d -= dec;
    RuleOutcome::Applied(
        out,
        TraceEntry {
            rule: RuleId::Rr6LargeCliqueEdge,
            effect: format!(
                "removed isolated clique of size {}, distance decreased by {}",
                clique.len(),
                dec
            ),
            dk: 0,
            dd: -dec,
            removed: clique,
            added: Vec::new(),
        },
    )
}

fn apply_rr7(inst: &Instance, rule: RuleId) -> RuleOutcome {
    // Both flavors fire above 2(k+d) isolated cliques. For the edge-based
    // distance each leftover clique touches the symmetric difference, whose
    // size is at most k + d for solvable instances. For the matching-based
    // distance each clique not forming a target cluster contributes at
    // least one to twice the distance (a clique strictly inside a target
    // cluster is only charged on the target side, so two cliques can share
    // one unit), and an edit repairs at most two cliques; at 2(k+d) this is
    // tight, witnessed by 2d singleton cliques pairing into d target
    // clusters.
    let threshold = match rule {
        RuleId::Rr7ManyCliquesMatching if inst.measure == Measure::MatchingDist => {
            2 * (inst.k + inst.d)
        }
        RuleId::Rr7ManyCliquesEdge if inst.measure == Measure::EdgeDist => 2 * (inst.k + inst.d),
        _ => return RuleOutcome::NotApplicable,
    };
    let count = isolated_cliques(&inst.g).len() as i64;
    if count > threshold {
        RuleOutcome::No(TraceEntry::event(
            rule,
            format!("{count} isolated cliques exceed the threshold {threshold}"),
        ))
    } else {
        RuleOutcome::NotApplicable
    }
}

/// Applies a single reduction rule to its lexicographically first trigger.
/// Rules other than RR1 report `NotApplicable` on instances with negative
/// parameters; deciding those is RR1's job.
pub fn apply_rule(inst: &Instance, rule: RuleId) -> RuleOutcome {
    if rule == RuleId::Rr1Trivial {
        return apply_rr1(inst);
    }
    if inst.k < 0 || inst.d < 0 || !rule.admissible(inst.measure) {
        return RuleOutcome::NotApplicable;
    }
    match rule {
        RuleId::Rr1Trivial => unreachable!(),
        RuleId::Rr2HeavyEdge => apply_rr2(inst),
        RuleId::Rr3HeavyNonEdge => apply_rr3(inst),
        RuleId::Rr4P3VertexBound => apply_rr4(inst),
        RuleId::Rr5SameClique => apply_rr5(inst),
        RuleId::Rr6LargeCliqueMatching => apply_rr6_matching(inst),
        RuleId::Rr6LargeCliqueEdge => apply_rr6_edge(inst),
        RuleId::Rr7ManyCliquesMatching | RuleId::Rr7ManyCliquesEdge => apply_rr7(inst, rule),
    }
}

// ---------------------------------------------------------------------------
// Exhaustive driver.
// ---------------------------------------------------------------------------

/// Incrementally maintained P3 statistics over the original vertex range.
/// Per-pair witness counts live in a flat triangular matrix so the cubic
/// build performs O(1) work per triple; toggling one edge only affects the
/// triples containing both endpoints, so updates cost O(n).
struct P3Index {
    n0: usize,
    counts: Vec<u32>,
    vertex: Vec<u32>,
    p3_vertex_count: usize,
}

impl P3Index {
    fn build(adj: &[BTreeSet<usize>]) -> Self {
        let n = adj.len();
        let mut index = P3Index {
            n0: n,
            counts: vec![0; n * n],
            vertex: vec![0; n],
            p3_vertex_count: 0,
        };
        // Bitset adjacency rows keep the cubic triple scan cheap.
        let words = n.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; n];
        for (u, nbrs) in adj.iter().enumerate() {
            for &v in nbrs {
                rows[u][v / 64] |= 1 << (v % 64);
            }
        }
        let bit = |u: usize, v: usize| rows[u][v / 64] >> (v % 64) & 1 == 1;
        for u in 0..n {
            for v in u + 1..n {
                let uv = bit(u, v);
                for w in v + 1..n {
                    let e = uv as u8 + bit(u, w) as u8 + bit(v, w) as u8;
                    if e == 2 {
                        index.bump(u, v, w, 1);
                    }
                }
            }
        }
        index
    }

    fn bump(&mut self, u: usize, v: usize, w: usize, delta: i32) {
        for (a, b) in [(u, v), (u, w), (v, w)] {
            let cell = &mut self.counts[a * self.n0 + b];
            *cell = cell.wrapping_add_signed(delta);
        }
        for x in [u, v, w] {
            let before = self.vertex[x];
            self.vertex[x] = before.wrapping_add_signed(delta);
            if before == 0 && delta > 0 {
                self.p3_vertex_count += 1;
            } else if self.vertex[x] == 0 && delta < 0 {
                self.p3_vertex_count -= 1;
            }
        }
    }

    /// Updates counts around toggling edge `{u, v}`; call with the adjacency
    /// still in its pre-toggle state, then toggle.
    fn pre_toggle(&mut self, adj: &[BTreeSet<usize>], u: usize, v: usize) {
        let n = adj.len();
        let was_edge = adj[u].contains(&v);
        for w in 0..n {
            if w == u || w == v {
                continue;
            }
            let uw = adj[u].contains(&w) as u8;
            let vw = adj[v].contains(&w) as u8;
            let before = was_edge as u8 + uw + vw;
            let after = (!was_edge) as u8 + uw + vw;
            let (mut a, mut b, mut c) = (u, v, w);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            if b > c {
                std::mem::swap(&mut b, &mut c);
            }
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            if before == 2 && after != 2 {
                self.bump(a, b, c, -1);
            } else if before != 2 && after == 2 {
                self.bump(a, b, c, 1);
            }
        }
    }

    /// Lexicographically first pair in at least `threshold` induced P3s
    /// matching the requested edge status.
    fn first_heavy(
        &self,
        adj: &[BTreeSet<usize>],
        threshold: u64,
        on_edges: bool,
    ) -> Option<(usize, usize, u64)> {
        for (u, adj_u) in adj.iter().enumerate().take(self.n0) {
            for v in u + 1..self.n0 {
                let c = self.counts[u * self.n0 + v] as u64;
                if c >= threshold && adj_u.contains(&v) == on_edges {
                    return Some((u, v, c));
                }
            }
        }
        None
    }
}

/// Mutable working state of the kernelization driver. Vertices carry stable
/// ids (originals first, fresh ones appended); the id a vertex would have in
/// the renumbered instance is its rank among the alive stable ids, so trace
/// entries stay consistent with step-by-step [`apply_rule`] replay.
struct Driver {
    variant: Variant,
    measure: Measure,
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
    alive_count: usize,
    /// stable id -> cluster key of the target cluster graph
    cluster_of: Vec<usize>,
    clusters: BTreeMap<usize, BTreeSet<usize>>,
    k: i64,
    d: i64,
    trace: Vec<TraceEntry>,
}

impl Driver {
    fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let mut adj = vec![BTreeSet::new(); n];
        for (u, v) in inst.g.edges() {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let mut clusters = BTreeMap::new();
        let mut cluster_of = vec![0; n];
        for (id, cluster) in inst.gc.clusters().iter().enumerate() {
            clusters.insert(id, cluster.iter().copied().collect::<BTreeSet<_>>());
            for &v in cluster {
                cluster_of[v] = id;
            }
        }
        Driver {
            variant: inst.variant,
            measure: inst.measure,
            adj,
            alive: vec![true; n],
            alive_count: n,
            cluster_of,
            clusters,
            k: inst.k,
            d: inst.d,
            trace: Vec::new(),
        }
    }

    /// Rank of a stable id among the alive ones = its id after renumbering.
    fn rank(&self, v: usize) -> usize {
        (0..v).filter(|&u| self.alive[u]).count()
    }

    fn ranks(&self, vs: &[usize]) -> Vec<usize> {
        let mut rank = Vec::with_capacity(vs.len());
        for &v in vs {
            rank.push(self.rank(v));
        }
        rank
    }

    fn remove(&mut self, vs: &[usize]) {
        for &v in vs {
            debug_assert!(self.alive[v]);
            self.alive[v] = false;
            self.alive_count -= 1;
            let key = self.cluster_of[v];
            let members = self.clusters.get_mut(&key).expect("cluster exists");
            members.remove(&v);
            if members.is_empty() {
                self.clusters.remove(&key);
            }
            let neighbors: Vec<usize> = self.adj[v].iter().copied().collect();
            for w in neighbors {
                self.adj[w].remove(&v);
            }
            self.adj[v].clear();
        }
    }

    fn push_fresh_clique(&mut self, size: usize, join: Option<usize>) -> Vec<usize> {
        let base = self.adj.len();
        let ids: Vec<usize> = (base..base + size).collect();
        for _ in 0..size {
            self.adj.push(BTreeSet::new());
            self.alive.push(true);
            self.cluster_of.push(usize::MAX);
        }
        self.alive_count += size;
        for i in 0..size {
            for j in i + 1..size {
                self.adj[base + i].insert(base + j);
                self.adj[base + j].insert(base + i);
            }
        }
        let key = join.unwrap_or_else(|| self.clusters.keys().next_back().map_or(0, |&k| k + 1));
        let members = self.clusters.entry(key).or_default();
        for &v in &ids {
            members.insert(v);
            self.cluster_of[v] = key;
        }
        ids
    }

    /// Isolated cliques of the current graph among `region` (stable ids of a
    /// set of components known to stay cliques), ordered by smallest member.
    fn isolated_cliques(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut cliques = Vec::new();
        for s in 0..n {
            if !self.alive[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            let sz = comp.len();
            if comp.iter().map(|&v| self.adj[v].len()).sum::<usize>() == sz * (sz - 1) {
                cliques.push(comp);
            }
        }
        cliques
    }

    fn finish_reduced(self) -> KernelResult {
        let keep: Vec<usize> = (0..self.adj.len()).filter(|&v| self.alive[v]).collect();
        let mut new_id = vec![usize::MAX; self.adj.len()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        for &v in &keep {
            for &w in &self.adj[v] {
                if w > v {
                    edges.push((new_id[v], new_id[w]));
                }
            }
        }
        let g = Graph::from_edges(keep.len(), edges).expect("live edges are valid");
        let clusters: Vec<Vec<usize>> = self
            .clusters
            .values()
            .map(|members| members.iter().map(|&v| new_id[v]).collect())
            .collect();
        let gc = ClusterGraph::from_clusters(keep.len(), clusters)
            .expect("live clusters partition the survivors");
        let inst = Instance::new(self.variant, self.measure, g, gc, self.k, self.d)
            .expect("vertex counts stay consistent");
        KernelResult {
            outcome: KernelOutcome::Reduced(inst),
            trace: self.trace,
        }
    }

    fn finish_no(mut self, entry: TraceEntry) -> KernelResult {
        let rule = entry.rule;
        self.trace.push(entry);
        KernelResult {
            outcome: KernelOutcome::No(rule),
            trace: self.trace,
        }
    }
}

/// Exhaustively applies all admissible reduction rules, always firing the
/// lowest-numbered applicable rule on its lexicographically first trigger.
///
/// P3 statistics are maintained incrementally across edge edits and the
/// clique phase touches no P3s, so the whole run stays within cubic time in
/// the vertex count.
pub fn kernelize(inst: &Instance) -> KernelResult {
    let mut driver = Driver::new(inst);

    if driver.k < 0 || driver.d < 0 {
        let entry = TraceEntry::event(
            RuleId::Rr1Trivial,
            format!("infeasible parameters: k = {}, d = {}", driver.k, driver.d),
        );
        return driver.finish_no(entry);
    }

    // Heavy-pair phase (RR2/RR3/RR4). Skipped entirely when the graph is a
    // cluster graph; later rules only delete whole isolated cliques or add
    // fresh ones, which never creates an induced P3, so this phase never
    // becomes applicable again.
    let has_p3 = !inst.g.is_cluster_graph();
    if has_p3 {
        let mut index = P3Index::build(&driver.adj);
        loop {
            if driver.k < 0 {
                let entry = TraceEntry::event(
                    RuleId::Rr1Trivial,
                    format!("infeasible parameters: k = {}, d = {}", driver.k, driver.d),
                );
                return driver.finish_no(entry);
            }
            let threshold = (driver.k + 1) as u64;
            if let Some((u, v, count)) = index.first_heavy(&driver.adj, threshold, true) {
                if driver.variant == Variant::Completion {
                    let entry = TraceEntry::event(
                        RuleId::Rr2HeavyEdge,
                        format!(
                            "edge {{{u},{v}}} lies in {count} induced P3s but deletions are forbidden"
                        ),
                    );
                    return driver.finish_no(entry);
                }
                index.pre_toggle(&driver.adj, u, v);
                driver.adj[u].remove(&v);
                driver.adj[v].remove(&u);
                driver.k -= 1;
                driver.trace.push(TraceEntry {
                    rule: RuleId::Rr2HeavyEdge,
                    effect: format!("deleted edge {{{u},{v}}} lying in {count} induced P3s"),
                    dk: -1,
                    dd: 0,
                    removed: Vec::new(),
                    added: Vec::new(),
                });
                continue;
            }
            if let Some((u, v, count)) = index.first_heavy(&driver.adj, threshold, false) {
                if driver.variant == Variant::Deletion {
                    let entry = TraceEntry::event(
                        RuleId::Rr3HeavyNonEdge,
                        format!(
                            "non-edge {{{u},{v}}} lies in {count} induced P3s but insertions are forbidden"
                        ),
                    );
                    return driver.finish_no(entry);
                }
                index.pre_toggle(&driver.adj, u, v);
                driver.adj[u].insert(v);
                driver.adj[v].insert(u);
                driver.k -= 1;
                driver.trace.push(TraceEntry {
                    rule: RuleId::Rr3HeavyNonEdge,
                    effect: format!("inserted edge {{{u},{v}}} lying in {count} induced P3s"),
                    dk: -1,
                    dd: 0,
                    removed: Vec::new(),
                    added: Vec::new(),
                });
                continue;
            }
            break;
        }
        let p3_vertices = index.p3_vertex_count as i64;
        let bound = driver.k * driver.k + 2 * driver.k;
        if p3_vertices > bound {
            let entry = TraceEntry::event(
                RuleId::Rr4P3VertexBound,
                format!("{p3_vertices} vertices lie in induced P3s, more than k^2 + 2k = {bound}"),
            );
            return driver.finish_no(entry);
        }
    }

    // Clique phase (RR5/RR6/RR7).
    loop {
        if driver.k < 0 || driver.d < 0 {
            let entry = TraceEntry::event(
                RuleId::Rr1Trivial,
                format!("infeasible parameters: k = {}, d = {}", driver.k, driver.d),
            );
            return driver.finish_no(entry);
        }
        let cliques = driver.isolated_cliques();

        // RR5: a clique isolated in both graphs disappears.
        if let Some(clique) = cliques.iter().find(|c| {
            let key = driver.cluster_of[c[0]];
            driver.clusters[&key].len() == c.len()
                && c.iter().all(|v| driver.clusters[&key].contains(v))
        }) {
            let removed = driver.ranks(clique);
            let size = clique.len();
            let clique = clique.clone();
            driver.remove(&clique);
            driver.trace.push(TraceEntry {
                rule: RuleId::Rr5SameClique,
                effect: format!("removed a {size}-vertex clique isolated in both graphs"),
                dk: 0,
                dd: 0,
                removed,
                added: Vec::new(),
            });
            continue;
        }

        match driver.measure {
            Measure::MatchingDist => {
                let threshold = driver.k + 2 * driver.d + 2;
                if let Some(clique) = cliques.iter().find(|c| c.len() as i64 > threshold) {
                    let mut overlaps: BTreeMap<usize, u64> = BTreeMap::new();
                    for &v in clique {
                        *overlaps.entry(driver.cluster_of[v]).or_insert(0) += 1;
                    }
                    // Tie-break by smallest cluster, i.e. smallest minimum member.
                    let (&target, &overlap) = overlaps
                        .iter()
                        .max_by_key(|&(&key, &count)| {
                            (
                                count,
                                std::cmp::Reverse(driver.clusters[&key].iter().next().copied()),
                            )
                        })
                        .expect("clique is non-empty");
                    if overlap as i64 <= driver.d {
                        let entry = TraceEntry::event(
                            RuleId::Rr6LargeCliqueMatching,
                            format!(
                                "isolated clique of size {} overlaps every target cluster in at most d = {} vertices",
                                clique.len(),
                                driver.d
                            ),
                        );
                        return driver.finish_no(entry);
                    }
                    let removed = driver.ranks(clique);
                    let size = clique.len();
                    let dd = -(size as i64 - overlap as i64);
                    let clique = clique.clone();
                    let target_survives = driver.clusters[&target].len() > overlap as usize;
                    driver.remove(&clique);
                    driver.d += dd;
                    let (added, effect) = if driver.d >= 0 {
                        let fresh = (driver.k + driver.d + 1) as usize;
                        let join = target_survives.then_some(target);
                        let ids = driver.push_fresh_clique(fresh, join);
                        let added = driver.ranks(&ids);
                        (
                            added,
                            format!(
                                "removed isolated clique of size {size} (best target overlap {overlap}), added fresh clique of size {fresh}"
                            ),
                        )
                    } else {
                        (
                            Vec::new(),
                            format!(
                                "removed isolated clique of size {size} (best target overlap {overlap}), distance exhausted"
                            ),
                        )
                    };
                    driver.trace.push(TraceEntry {
                        rule: RuleId::Rr6LargeCliqueMatching,
                        effect,
                        dk: 0,
                        dd,
                        removed,
                        added,
                    });
                    continue;
                }
                if cliques.len() as i64 > 2 * (driver.k + driver.d) {
                    let entry = TraceEntry::event(
                        RuleId::Rr7ManyCliquesMatching,
                        format!(
                            "{} isolated cliques exceed the threshold {}",
                            cliques.len(),
                            2 * (driver.k + driver.d)
                        ),
                    );
                    return driver.finish_no(entry);
                }
            }
            Measure::EdgeDist => {
                if let Some(clique) = cliques.iter().find(|c| c.len() as i64 > driver.k + 1) {
                    let pairs = |s: u64| (s * s.saturating_sub(1) / 2) as i64;
                    let mut overlaps: BTreeMap<usize, u64> = BTreeMap::new();
                    for &v in clique {
                        *overlaps.entry(driver.cluster_of[v]).or_insert(0) += 1;
                    }
                    let mut e_c = 0i64;
                    let mut outside = 0i64;
                    for (key, members) in &driver.clusters {
                        let sz = members.len() as u64;
                        e_c += pairs(sz);
                        outside += pairs(sz - overlaps.get(key).copied().unwrap_or(0));
                    }
                    let in_c: i64 = overlaps.values().map(|&c| pairs(c)).sum();
                    let dec = e_c + pairs(clique.len() as u64) - 2 * in_c - outside;
                    let removed = driver.ranks(clique);
                    let size = clique.len();
                    let clique = clique.clone();
                    driver.remove(&clique);
                    driver.d -= dec;
                    driver.trace.push(TraceEntry {
                        rule: RuleId::Rr6LargeCliqueEdge,
                        effect: format!(
                            "removed isolated clique of size {size}, distance decreased by {dec}"
                        ),
                        dk: 0,
                        dd: -dec,
                        removed,
                        added: Vec::new(),
                    });
                    continue;
                }
                if cliques.len() as i64 > 2 * (driver.k + driver.d) {
                    let entry = TraceEntry::event(
                        RuleId::Rr7ManyCliquesEdge,
                        format!(
                            "{} isolated cliques exceed the threshold {}",
                            cliques.len(),
                            2 * (driver.k + driver.d)
                        ),
                    );
                    return driver.finish_no(entry);
                }
            }
        }
        break;
    }

    driver.finish_reduced()
}
