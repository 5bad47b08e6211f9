//! The two distance measures between cluster graphs: matching-based and
//! edge-based.

use crate::bipartite::{max_weight_bipartite_matching, WeightedBipartite};
use crate::graph::{ClusterGraph, Graph};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error("cluster graphs have different vertex counts ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
}

fn check_sizes(a: &ClusterGraph, b: &ClusterGraph) -> Result<(), DistanceError> {
    if a.n() != b.n() {
        return Err(DistanceError::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

/// Overlap sizes |C_i ∩ D_j| for all cluster pairs with non-empty
/// intersection.
fn overlap_counts(a: &ClusterGraph, b: &ClusterGraph) -> BTreeMap<(usize, usize), u64> {
    let mut counts = BTreeMap::new();
    for v in 0..a.n() {
        *counts
            .entry((a.cluster_of(v), b.cluster_of(v)))
            .or_insert(0) += 1;
    }
    counts
}

/// The cluster-overlap bipartite graph between `a` and `b`: one left vertex
/// per cluster of `a`, one right vertex per cluster of `b`, weight
/// |C_i ∩ D_j|.
pub fn overlap_bipartite(a: &ClusterGraph, b: &ClusterGraph) -> WeightedBipartite {
    let mut bp = WeightedBipartite::new(a.cluster_count(), b.cluster_count());
    for ((i, j), w) in overlap_counts(a, b) {
        bp.set_weight(i, j, w);
    }
    bp
}

/// Matching-based distance: `n - W`, where `W` is the weight of a
/// maximum-weight matching in the cluster-overlap bipartite graph. Counts
/// how many vertices must move between clusters to make the two cluster
/// graphs equal.
pub fn matching_distance(a: &ClusterGraph, b: &ClusterGraph) -> Result<u64, DistanceError> {
    check_sizes(a, b)?;
    let (w, _) = max_weight_bipartite_matching(&overlap_bipartite(a, b));
    Ok(a.n() as u64 - w)
}

/// Edge-based distance: the size of the symmetric difference of the two
/// induced edge sets.
pub fn edge_distance(a: &ClusterGraph, b: &ClusterGraph) -> Result<u64, DistanceError> {
    check_sizes(a, b)?;
    // Shared edges are pairs lying in the same cluster on both sides: every
    // overlap cell of size c contributes C(c, 2).
    let shared: u64 = overlap_counts(a, b)
        .values()
        .map(|&c| c * (c - 1) / 2)
        .sum();
    Ok(a.intra_pair_count() + b.intra_pair_count() - 2 * shared)
}

/// |E(g) ⊕ E_c| for an arbitrary graph `g` against the edge set induced by
/// the partition `c`.
pub fn graph_cluster_edge_distance(g: &Graph, c: &ClusterGraph) -> u64 {
    debug_assert_eq!(g.n(), c.n());
    let shared = g.edges().filter(|&(u, v)| c.same_cluster(u, v)).count() as u64;
    g.edge_count() as u64 + c.intra_pair_count() - 2 * shared
}

/// Distance under the given measure.
pub fn distance(
    measure: crate::instance::Measure,
    a: &ClusterGraph,
    b: &ClusterGraph,
) -> Result<u64, DistanceError> {
    match measure {
        crate::instance::Measure::MatchingDist => matching_distance(a, b),
        crate::instance::Measure::EdgeDist => edge_distance(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cluster_to_graph;

    /// The 9-vertex example pair: {0..=5},{6,7},{8} vs {0,1,2,6,7},{3,4,5,8}.
    pub fn example_pair() -> (ClusterGraph, ClusterGraph) {
        let a = ClusterGraph::from_clusters(9, vec![vec![0, 1, 2, 3, 4, 5], vec![6, 7], vec![8]])
            .unwrap();
        let b =
            ClusterGraph::from_clusters(9, vec![vec![0, 1, 2, 6, 7], vec![3, 4, 5, 8]]).unwrap();
        (a, b)
    }

    #[test]
    fn example_pair_distances() {
        let (a, b) = example_pair();
        assert_eq!(matching_distance(&a, &b).unwrap(), 4);
        assert_eq!(edge_distance(&a, &b).unwrap(), 18);
    }

    #[test]
    fn identical_cluster_graphs_have_distance_zero() {
        let (a, _) = example_pair();
        assert_eq!(matching_distance(&a, &a).unwrap(), 0);
        assert_eq!(edge_distance(&a, &a).unwrap(), 0);
    }

    #[test]
    fn small_hand_computed_pair() {
        let a = ClusterGraph::from_clusters(3, vec![vec![0, 1], vec![2]]).unwrap();
        let b = ClusterGraph::from_clusters(3, vec![vec![0], vec![1, 2]]).unwrap();
        // Moving one vertex fixes the matching distance; the edge sets are
        // {01} vs {12}, symmetric difference 2.
        assert_eq!(matching_distance(&a, &b).unwrap(), 1);
        assert_eq!(edge_distance(&a, &b).unwrap(), 2);
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let a = ClusterGraph::singletons(2);
        let b = ClusterGraph::singletons(3);
        assert!(matching_distance(&a, &b).is_err());
        assert!(edge_distance(&a, &b).is_err());
    }

    #[test]
    fn graph_cluster_distance_agrees_with_cluster_distance() {
        let (a, b) = example_pair();
        let g = cluster_to_graph(&a);
        assert_eq!(graph_cluster_edge_distance(&g, &b), 18);
    }
}
