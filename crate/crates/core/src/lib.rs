//! Exact solving for dynamic cluster editing: given a graph `G`, a target
//! cluster graph `G_c`, an edit budget `k` and a distance bound `d`, decide
//! whether `G` can be turned into a cluster graph `G'` with at most `k` edge
//! modifications such that `G'` stays within distance `d` of `G_c`.
//!
//! Three modification regimes (editing, deletion, completion) combine with
//! two distance measures (matching-based and edge-based) into six problem
//! variants. The crate provides:
//!
//! * the two distance measures, backed by exact maximum-weight bipartite
//!   matching ([`distance`], [`bipartite`]);
//! * instance modelling and solution verification ([`instance`]);
//! * data reduction to polynomial kernels in `k + d` ([`kernel`]);
//! * a multi-choice knapsack engine ([`mck`]);
//! * exact solvers: a brute-force oracle, kernel-plus-search, and the
//!   knapsack-based fixed-parameter algorithms for the tractable
//!   single-parameter variants ([`solvers`]);
//! * structured and random instance generators ([`generators`]).

pub mod bipartite;
pub mod distance;
pub mod generators;
pub mod graph;
pub mod instance;
pub mod kernel;
pub mod mck;
pub mod solvers;

pub use graph::{
    cluster_to_graph, enumerate_p3_pairs, is_cluster_graph, to_cluster_graph, ClusterGraph, Graph,
};
pub use instance::{Instance, Measure, Solution, Variant};
