//! Exact solvers: the brute-force oracle, the kernelize-then-search
//! combined-parameter solver, and the multi-choice-knapsack-based
//! fixed-parameter solvers for the tractable single-parameter cases.

mod combined;
mod completion;
mod deletion;
mod four_step;
mod oracle;

pub use combined::{solve_combined, solve_combined_with_cap, CombinedOutcome};
pub use completion::{
    fpt_completion_edge_d, fpt_completion_matching_d, normalize_completion, t_map,
    tmap_merge_inequality, TMap,
};
pub use deletion::fpt_deletion_edge_k;
pub use four_step::{four_step_drive, Tuple, TupleSet};
pub use oracle::{oracle_solve, oracle_solve_with_cap, DEFAULT_ORACLE_CAP};

use crate::instance::{InstanceError, Solution};
use thiserror::Error;

/// Decision with witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Yes(Solution),
    No,
}

impl SolveOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, SolveOutcome::Yes(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("instance has {n} vertices, above the configured oracle cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("kernel still has {n} vertices, above the oracle cap {cap}; parameters too large for exact desk-scale solving")]
    KernelTooLargeForOracle { n: usize, cap: usize },
    #[error("solver requires a {expected} instance, got {got}")]
    WrongVariant { expected: String, got: String },
    #[error("malformed part structure: {0}")]
    MalformedParts(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal contract violated: {0}")]
    ContractViolation(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Enumerates all partitions of `0..n` as restricted-growth assignments,
/// invoking `visit` with each; `visit` returning `false` aborts.
pub(crate) fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut assign = vec![0usize; n];
    fn go(
        assign: &mut Vec<usize>,
        i: usize,
        max_used: usize,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = assign.len();
        if i == n {
            return visit(assign);
        }
        for block in 0..=max_used + 1 {
            assign[i] = block;
            if !go(assign, i + 1, max_used.max(block), visit) {
                return false;
            }
        }
        true
    }
    // Vertex 0 always opens block 0.
    go(&mut assign, 1, 0, &mut visit);
}
