//! Combined-parameter solving: kernelize, then run the brute-force oracle
//! on the reduced instance, whose size is bounded in `k + d` by the kernel
//! lemmas.

use super::{oracle_solve_with_cap, SolveOutcome, SolverError, DEFAULT_ORACLE_CAP};
use crate::instance::{Instance, Solution};
use crate::kernel::{kernelize, KernelOutcome, TraceEntry};

/// Outcome of [`solve_combined`]. Witnesses live on the kernel instance;
/// the trace maps them back only in the decision-preserving sense.
#[derive(Debug, Clone)]
pub enum CombinedOutcome {
    Yes {
        solution: Solution,
        kernel: Instance,
        trace: Vec<TraceEntry>,
    },
    No {
        trace: Vec<TraceEntry>,
    },
}

impl CombinedOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, CombinedOutcome::Yes { .. })
    }

    pub fn trace(&self) -> &[TraceEntry] {
        match self {
            CombinedOutcome::Yes { trace, .. } | CombinedOutcome::No { trace } => trace,
        }
    }
}

pub fn solve_combined(inst: &Instance) -> Result<CombinedOutcome, SolverError> {
    solve_combined_with_cap(inst, DEFAULT_ORACLE_CAP)
}

pub fn solve_combined_with_cap(
    inst: &Instance,
    cap: usize,
) -> Result<CombinedOutcome, SolverError> {
    let result = kernelize(inst);
    match result.outcome {
        KernelOutcome::No(_) => Ok(CombinedOutcome::No {
            trace: result.trace,
        }),
        KernelOutcome::Reduced(kernel) => {
            if kernel.n() > cap {
                return Err(SolverError::KernelTooLargeForOracle { n: kernel.n(), cap });
            }
            match oracle_solve_with_cap(&kernel, cap)? {
                SolveOutcome::Yes(solution) => Ok(CombinedOutcome::Yes {
                    solution,
                    kernel,
                    trace: result.trace,
                }),
                SolveOutcome::No => Ok(CombinedOutcome::No {
                    trace: result.trace,
                }),
            }
        }
    }
}
