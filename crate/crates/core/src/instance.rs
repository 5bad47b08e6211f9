//! Problem instances for the six dynamic cluster editing variants, solution
//! verification, and the swap symmetry for editing instances whose input
//! graph is already a cluster graph.

use crate::distance::{self, edge_distance, DistanceError};
use crate::graph::{cluster_to_graph, to_cluster_graph, ClusterGraph, Graph};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Which edge modifications are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Editing,
    Deletion,
    Completion,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Editing, Variant::Deletion, Variant::Completion];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Editing => write!(f, "editing"),
            Variant::Deletion => write!(f, "deletion"),
            Variant::Completion => write!(f, "completion"),
        }
    }
}

/// Which distance between cluster graphs bounds the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    MatchingDist,
    EdgeDist,
}

impl Measure {
    pub const ALL: [Measure; 2] = [Measure::MatchingDist, Measure::EdgeDist];
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::MatchingDist => write!(f, "matching"),
            Measure::EdgeDist => write!(f, "edge"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("graph has {graph} vertices but target cluster graph has {clusters}")]
    SizeMismatch { graph: usize, clusters: usize },
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

/// One instance of any of the six problem variants: modify `g` with at most
/// `k` edge edits (of the kind the variant allows) into a cluster graph
/// whose distance to `gc` under `measure` is at most `d`.
///
/// `k` and `d` are signed so that reduction rules may transiently drive them
/// below zero; externally supplied instances are expected to be nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub variant: Variant,
    pub measure: Measure,
    pub g: Graph,
    pub gc: ClusterGraph,
    pub k: i64,
    pub d: i64,
}

impl Instance {
    pub fn new(
        variant: Variant,
        measure: Measure,
        g: Graph,
        gc: ClusterGraph,
        k: i64,
        d: i64,
    ) -> Result<Self, InstanceError> {
        if g.n() != gc.n() {
            return Err(InstanceError::SizeMismatch {
                graph: g.n(),
                clusters: gc.n(),
            });
        }
        Ok(Instance {
            variant,
            measure,
            g,
            gc,
            k,
            d,
        })
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }
}

/// A candidate solution: the target cluster graph together with the edit set
/// `E(G) ⊕ E(G')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub gprime: ClusterGraph,
    pub edits: BTreeSet<(usize, usize)>,
}

impl Solution {
    /// Builds a solution for graph `g`, deriving the edit set.
    pub fn new(g: &Graph, gprime: ClusterGraph) -> Result<Self, InstanceError> {
        if g.n() != gprime.n() {
            return Err(InstanceError::SizeMismatch {
                graph: g.n(),
                clusters: gprime.n(),
            });
        }
        let edits = edit_set(g, &gprime);
        Ok(Solution { gprime, edits })
    }
}

/// `E(g) ⊕ E(gprime)` as ordered pairs `(u, v)`, `u < v`.
pub fn edit_set(g: &Graph, gprime: &ClusterGraph) -> BTreeSet<(usize, usize)> {
    let mut edits = BTreeSet::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) != gprime.same_cluster(u, v) {
                edits.insert((u, v));
            }
        }
    }
    edits
}

/// Why a candidate solution was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    /// More than `k` edge modifications.
    BudgetExceeded,
    /// Distance to the target cluster graph exceeds `d`.
    DistanceExceeded,
    /// An edit of a kind the variant forbids (an insertion for deletion
    /// instances, a deletion for completion instances).
    ForbiddenEdit,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::BudgetExceeded => write!(f, "BudgetExceeded"),
            FailureReason::DistanceExceeded => write!(f, "DistanceExceeded"),
            FailureReason::ForbiddenEdit => write!(f, "ForbiddenEdit"),
        }
    }
}

/// Outcome of [`verify_solution`]: valid, or the list of violated
/// constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub failures: Vec<FailureReason>,
    /// |E(G) ⊕ E(G')|
    pub edit_count: u64,
    /// Distance of G' to G_c under the instance's measure.
    pub distance: u64,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks a candidate solution: the edit budget, the distance bound, and the
/// variant's edit-direction constraint.
pub fn verify_solution(inst: &Instance, sol: &Solution) -> Result<Verification, InstanceError> {
    if sol.gprime.n() != inst.n() {
        return Err(InstanceError::SizeMismatch {
            graph: inst.n(),
            clusters: sol.gprime.n(),
        });
    }
    let edits = edit_set(&inst.g, &sol.gprime);
    debug_assert_eq!(edits, sol.edits, "solution edit set out of sync");
    let mut failures = Vec::new();
    if (edits.len() as i64) > inst.k {
        failures.push(FailureReason::BudgetExceeded);
    }
    let dist = distance::distance(inst.measure, &sol.gprime, &inst.gc)?;
    if (dist as i64) > inst.d {
        failures.push(FailureReason::DistanceExceeded);
    }
    let forbidden = edits.iter().any(|&(u, v)| match inst.variant {
        Variant::Editing => false,
        // Deletions only: every edited pair must have been an edge.
        Variant::Deletion => !inst.g.has_edge(u, v),
        // Insertions only: every edited pair must have been a non-edge.
        Variant::Completion => inst.g.has_edge(u, v),
    });
    if forbidden {
        failures.push(FailureReason::ForbiddenEdit);
    }
    Ok(Verification {
        failures,
        edit_count: edits.len() as u64,
        distance: dist,
    })
}

/// Swaps the roles of `g` and `gc` (and of `k` and `d`) in an editing
/// instance with edge-based distance whose input graph is already a cluster
/// graph. The yes/no status is preserved.
pub fn swap_instance(inst: &Instance) -> Result<Instance, InstanceError> {
    if inst.variant != Variant::Editing || inst.measure != Measure::EdgeDist {
        return Err(InstanceError::NotApplicable(
            "swap requires an editing instance with edge-based distance".into(),
        ));
    }
    let g_as_clusters = to_cluster_graph(&inst.g).map_err(|_| {
        InstanceError::NotApplicable("swap requires the input graph to be a cluster graph".into())
    })?;
    Instance::new(
        inst.variant,
        inst.measure,
        cluster_to_graph(&inst.gc),
        g_as_clusters,
        inst.d,
        inst.k,
    )
}

/// For edge-distance instances with `k + d = |E(G) ⊕ E(G_c)|`, any solution
/// must spend the budget exactly: `|edits| = k`, distance exactly `d`, and
/// all edits inside `E(G) ⊕ E(G_c)`. Returns whether the given (verified)
/// solution satisfies this; exposed as a test oracle.
pub fn exact_modification_check(inst: &Instance, sol: &Solution) -> Result<bool, InstanceError> {
    if inst.measure != Measure::EdgeDist {
        return Err(InstanceError::NotApplicable(
            "exact-modification property is specific to the edge-based distance".into(),
        ));
    }
    let total = crate::distance::graph_cluster_edge_distance(&inst.g, &inst.gc);
    if inst.k + inst.d != total as i64 {
        return Err(InstanceError::NotApplicable(format!(
            "instance is not tight: k + d = {} but |E ⊕ E_c| = {}",
            inst.k + inst.d,
            total
        )));
    }
    if (sol.edits.len() as i64) != inst.k {
        return Ok(false);
    }
    if edge_distance(&sol.gprime, &inst.gc)? as i64 != inst.d {
        return Ok(false);
    }
    let inside = sol
        .edits
        .iter()
        .all(|&(u, v)| inst.g.has_edge(u, v) != inst.gc.same_cluster(u, v));
    Ok(inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cluster_to_graph;

    fn example_pair() -> (ClusterGraph, ClusterGraph) {
        let a = ClusterGraph::from_clusters(9, vec![vec![0, 1, 2, 3, 4, 5], vec![6, 7], vec![8]])
            .unwrap();
        let b =
            ClusterGraph::from_clusters(9, vec![vec![0, 1, 2, 6, 7], vec![3, 4, 5, 8]]).unwrap();
        (a, b)
    }

    #[test]
    fn zero_edit_solution_verifies() {
        let gc = ClusterGraph::from_clusters(3, vec![vec![0, 1], vec![2]]).unwrap();
        let g = cluster_to_graph(&gc);
        let inst = Instance::new(
            Variant::Editing,
            Measure::EdgeDist,
            g.clone(),
            gc.clone(),
            0,
            0,
        )
        .unwrap();
        let sol = Solution::new(&g, gc).unwrap();
        let v = verify_solution(&inst, &sol).unwrap();
        assert!(v.is_valid());
        assert_eq!(v.edit_count, 0);
    }

    #[test]
    fn deletion_instance_rejects_insertion() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let gc = ClusterGraph::from_clusters(3, vec![vec![0, 1, 2]]).unwrap();
        let inst = Instance::new(
            Variant::Deletion,
            Measure::EdgeDist,
            g.clone(),
            gc.clone(),
            3,
            3,
        )
        .unwrap();
        // Candidate inserts edges to reach the full triangle.
        let sol = Solution::new(&g, gc).unwrap();
        let v = verify_solution(&inst, &sol).unwrap();
        assert!(v.failures.contains(&FailureReason::ForbiddenEdit));
    }

    #[test]
    fn worked_example_verification() {
        let (a, b) = example_pair();
        let g = cluster_to_graph(&a);
        let sol = Solution::new(&g, a.clone()).unwrap();
        let yes = Instance::new(
            Variant::Editing,
            Measure::MatchingDist,
            g.clone(),
            b.clone(),
            0,
            4,
        )
        .unwrap();
        assert!(verify_solution(&yes, &sol).unwrap().is_valid());
        let no = Instance::new(Variant::Editing, Measure::MatchingDist, g, b, 0, 3).unwrap();
        let v = verify_solution(&no, &sol).unwrap();
        assert_eq!(v.failures, vec![FailureReason::DistanceExceeded]);
    }

    #[test]
    fn swap_exchanges_graph_roles_and_parameters() {
        let gc = ClusterGraph::from_clusters(3, vec![vec![0], vec![1, 2]]).unwrap();
        let g =
            cluster_to_graph(&ClusterGraph::from_clusters(3, vec![vec![0, 1], vec![2]]).unwrap());
        let inst = Instance::new(Variant::Editing, Measure::EdgeDist, g, gc, 3, 5).unwrap();
        let swapped = swap_instance(&inst).unwrap();
        assert_eq!(swapped.k, 5);
        assert_eq!(swapped.d, 3);
        assert_eq!(swapped.g, cluster_to_graph(&inst.gc));
        assert_eq!(
            swapped.gc,
            ClusterGraph::from_clusters(3, vec![vec![0, 1], vec![2]]).unwrap()
        );
        // Involution.
        let back = swap_instance(&swapped).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn swap_rejects_wrong_variant_and_non_cluster_input() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let gc = ClusterGraph::singletons(3);
        let del = Instance::new(
            Variant::Deletion,
            Measure::EdgeDist,
            g.clone(),
            gc.clone(),
            0,
            0,
        )
        .unwrap();
        assert!(swap_instance(&del).is_err());
        let path = Instance::new(Variant::Editing, Measure::EdgeDist, g, gc, 0, 0).unwrap();
        assert!(swap_instance(&path).is_err());
    }

    #[test]
    fn exact_modification_on_tight_instance() {
        // g = {01}, gc = {{0,1,2}}: symmetric difference {02, 12}, size 2.
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let gc = ClusterGraph::from_clusters(3, vec![vec![0, 1, 2]]).unwrap();
        let inst = Instance::new(
            Variant::Completion,
            Measure::EdgeDist,
            g.clone(),
            gc.clone(),
            2,
            0,
        )
        .unwrap();
        let sol = Solution::new(&g, gc).unwrap();
        assert!(verify_solution(&inst, &sol).unwrap().is_valid());
        assert!(exact_modification_check(&inst, &sol).unwrap());
        // Non-tight instance is rejected.
        let loose = Instance::new(
            Variant::Completion,
            Measure::EdgeDist,
            inst.g.clone(),
            inst.gc.clone(),
            2,
            1,
        )
        .unwrap();
        assert!(exact_modification_check(&loose, &sol).is_err());
    }
}
