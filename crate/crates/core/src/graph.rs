//! Undirected simple graphs on vertex ids `0..n` and cluster graphs
//! (partitions of the vertex set into cliques).

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("not a cluster graph: {{{0}, {1}, {2}}} induces a P3")]
    NotClusterGraph(usize, usize, usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// An undirected simple graph. Vertices are `0..n`; edges are unordered
/// pairs stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Empty graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are ignored;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            m += list.iter().filter(|&&v| v > u).count();
        }
        Ok(Graph { n, adj, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// All edges as pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
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
            comps.push(comp);
        }
        comps
    }

    /// The subgraph induced by `keep` (must be sorted and duplicate-free),
    /// with vertices renumbered to `0..keep.len()` in order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut adj = vec![Vec::new(); keep.len()];
        let mut m = 0;
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                if new_id[w] != usize::MAX {
                    adj[i].push(new_id[w]);
                }
            }
            adj[i].sort_unstable();
            m += adj[i].iter().filter(|&&w| w > i).count();
        }
        Graph {
            n: keep.len(),
            adj,
            m,
        }
    }

    /// True iff the graph is a disjoint union of cliques, i.e. it contains
    /// no induced P3. Checked component-wise via edge counts.
    pub fn is_cluster_graph(&self) -> bool {
        for comp in self.components() {
            let s = comp.len();
            let internal: usize = comp.iter().map(|&v| self.degree(v)).sum();
            if internal != s * (s - 1) {
                return false;
            }
        }
        true
    }
}

/// True iff `g` contains no induced P3 (every component is a clique).
pub fn is_cluster_graph(g: &Graph) -> bool {
    g.is_cluster_graph()
}

/// A partition of `0..n` into non-empty clusters. Clusters are kept in
/// canonical form: each sorted ascending, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterGraph {
    n: usize,
    cluster_of: Vec<usize>,
    clusters: Vec<Vec<usize>>,
}

impl ClusterGraph {
    /// Builds a cluster graph from explicit clusters, validating that they
    /// partition `0..n`.
    pub fn from_clusters(n: usize, clusters: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut cluster_of = vec![usize::MAX; n];
        for cluster in &clusters {
            if cluster.is_empty() {
                return Err(GraphError::InvalidPartition("empty cluster".into()));
            }
            for &v in cluster {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
                if cluster_of[v] != usize::MAX {
                    return Err(GraphError::InvalidPartition(format!(
                        "vertex {v} appears in two clusters"
                    )));
                }
                cluster_of[v] = 0;
            }
        }
        if let Some(v) = cluster_of.iter().position(|&c| c == usize::MAX) {
            return Err(GraphError::InvalidPartition(format!(
                "vertex {v} missing from partition"
            )));
        }
        let mut clusters: Vec<Vec<usize>> = clusters
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        clusters.sort_by_key(|c| c[0]);
        for (i, cluster) in clusters.iter().enumerate() {
            for &v in cluster {
                cluster_of[v] = i;
            }
        }
        Ok(ClusterGraph {
            n,
            cluster_of,
            clusters,
        })
    }

    /// Builds a cluster graph from a vertex -> cluster-id assignment.
    /// Ids may be arbitrary; they are compacted canonically.
    pub fn from_assignment(assign: &[usize]) -> Self {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in assign.iter().enumerate() {
            groups.entry(c).or_default().push(v);
        }
        ClusterGraph::from_clusters(assign.len(), groups.into_values().collect())
            .expect("assignment always forms a partition")
    }

    /// Every vertex in its own cluster.
    pub fn singletons(n: usize) -> Self {
        ClusterGraph::from_assignment(&(0..n).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster(&self, i: usize) -> &[usize] {
        &self.clusters[i]
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.cluster_of[v]
    }

    pub fn same_cluster(&self, u: usize, v: usize) -> bool {
        self.cluster_of[u] == self.cluster_of[v]
    }

    /// Number of intra-cluster vertex pairs, i.e. edges of the induced
    /// cluster graph.
    pub fn intra_pair_count(&self) -> u64 {
        self.clusters
            .iter()
            .map(|c| (c.len() as u64) * (c.len() as u64 - 1) / 2)
            .sum()
    }

    /// Restriction to `keep` (sorted, duplicate-free), renumbered to
    /// `0..keep.len()`; emptied clusters disappear.
    pub fn restrict(&self, keep: &[usize]) -> ClusterGraph {
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut clusters = Vec::new();
        for cluster in &self.clusters {
            let c: Vec<usize> = cluster
                .iter()
                .map(|&v| new_id[v])
                .filter(|&v| v != usize::MAX)
                .collect();
            if !c.is_empty() {
                clusters.push(c);
            }
        }
        ClusterGraph::from_clusters(keep.len(), clusters).expect("restriction stays a partition")
    }
}

/// Interprets a cluster-graph `Graph` as a partition given by its connected
/// components. Fails with the witnessing P3 if some component is not a clique.
pub fn to_cluster_graph(g: &Graph) -> Result<ClusterGraph, GraphError> {
    let comps = g.components();
    for comp in &comps {
        let s = comp.len();
        let internal: usize = comp.iter().map(|&v| g.degree(v)).sum();
        if internal != s * (s - 1) {
            // Find a concrete induced P3 for the error message.
            for &u in comp {
                for &v in comp {
                    if u < v && !g.has_edge(u, v) {
                        for &w in g.neighbors(u) {
                            if g.has_edge(w, v) {
                                return Err(GraphError::NotClusterGraph(u, w, v));
                            }
                        }
                    }
                }
            }
            unreachable!("component with missing edges must contain a P3");
        }
    }
    ClusterGraph::from_clusters(g.n(), comps)
}

/// The graph whose edges are exactly the intra-cluster pairs of `c`.
pub fn cluster_to_graph(c: &ClusterGraph) -> Graph {
    let mut edges = Vec::with_capacity(c.intra_pair_count() as usize);
    for cluster in c.clusters() {
        for (i, &u) in cluster.iter().enumerate() {
            for &v in &cluster[i + 1..] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(c.n(), edges).expect("cluster pairs are valid edges")
}

/// Exact counts of induced P3s per vertex pair, plus the set of vertices
/// contained in at least one induced P3.
#[derive(Debug, Clone, Default)]
pub struct P3Stats {
    pair_counts: BTreeMap<(usize, usize), u64>,
    vertices: BTreeSet<usize>,
}

impl P3Stats {
    /// Number of witnesses `w` such that `{u, v, w}` induces a P3.
    pub fn pair_count(&self, u: usize, v: usize) -> u64 {
        let key = if u < v { (u, v) } else { (v, u) };
        self.pair_counts.get(&key).copied().unwrap_or(0)
    }

    /// Pairs lying in at least one induced P3, lexicographically ordered.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.pair_counts.iter().map(|(&p, &c)| (p, c))
    }

    /// Vertices contained in at least one induced P3.
    pub fn p3_vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }
}

/// For every vertex pair lying in at least one induced P3, the exact number
/// of induced P3s containing that pair. A triple `{u, v, w}` is an induced
/// P3 iff exactly two of its three pairs are edges; it contributes one
/// witness to each of its three pairs.
pub fn enumerate_p3_pairs(g: &Graph) -> P3Stats {
    let mut stats = P3Stats::default();
    let n = g.n();
    for u in 0..n {
        for v in u + 1..n {
            for w in v + 1..n {
                let e = g.has_edge(u, v) as u8 + g.has_edge(u, w) as u8 + g.has_edge(v, w) as u8;
                if e == 2 {
                    *stats.pair_counts.entry((u, v)).or_insert(0) += 1;
                    *stats.pair_counts.entry((u, w)).or_insert(0) += 1;
                    *stats.pair_counts.entry((v, w)).or_insert(0) += 1;
                    stats.vertices.extend([u, v, w]);
                }
            }
        }
    }
    stats
}
