//! Subcommand implementations. Each returns the process exit code plus the
//! produced stdout/stderr text, so the test suite can drive them directly.

use crate::files::{
    edit_records, parse_measure, parse_variant, ClustersFile, InstanceFile, KernelizeReport,
    ResultFile, ResultStats, SolutionFile, TraceRec,
};
use dynce_core::distance;
use dynce_core::generators::{
    gen_3partition_completion_edge, gen_clique_editing_edge, gen_mcclique_deletion_edge,
    gen_random, gen_x3c_deletion_matching, CliqueSource, McCliqueSource, ThreePartitionSource,
    X3cSource,
};
use dynce_core::graph::Graph;
use dynce_core::instance::{verify_solution, Instance, Measure, Variant};
use dynce_core::kernel::{kernel_vertex_bound, kernelize, KernelOutcome};
use dynce_core::solvers::{
    fpt_completion_edge_d, fpt_completion_matching_d, fpt_deletion_edge_k, oracle_solve_with_cap,
    solve_combined_with_cap, CombinedOutcome, SolveOutcome, SolverError, DEFAULT_ORACLE_CAP,
};
use std::path::Path;
use std::time::Instant;

/// Environment variable mirroring `--cap` for the oracle vertex limit.
pub const ORACLE_CAP_ENV: &str = "DYNCE_ORACLE_CAP";

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Default)]
pub struct CmdOutput {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        CmdOutput {
            exit: EXIT_YES,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(msg: impl Into<String>) -> Self {
        CmdOutput {
            exit: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {}\n", msg.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    Auto,
    Oracle,
    Combined,
    FptK,
    FptD,
}

impl Algo {
    pub fn parse(s: &str) -> Option<Algo> {
        match s {
            "auto" => Some(Algo::Auto),
            "oracle" => Some(Algo::Oracle),
            "combined" => Some(Algo::Combined),
            "fpt-k" => Some(Algo::FptK),
            "fpt-d" => Some(Algo::FptD),
            _ => None,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance, String> {
    let file: InstanceFile = read_json(path)?;
    file.to_instance()
        .map_err(|e| format!("{}: {e}", path.display()))
}

/// Resolves the oracle cap: flag, then environment, then default.
pub fn resolve_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var(ORACLE_CAP_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_ORACLE_CAP)
}

fn dispatch_auto(inst: &Instance) -> Algo {
    match (inst.variant, inst.measure) {
        (Variant::Deletion, Measure::EdgeDist) => Algo::FptK,
        (Variant::Completion, _) => Algo::FptD,
        _ => Algo::Combined,
    }
}

pub fn cmd_solve(
    path: &Path,
    algo: Algo,
    cap: Option<usize>,
    emit_witness: bool,
    json: bool,
) -> CmdOutput {
    let inst = match load_instance(path) {
        Ok(inst) => inst,
        Err(e) => return CmdOutput::error(e),
    };
    let cap = resolve_cap(cap);
    let algo = if algo == Algo::Auto {
        dispatch_auto(&inst)
    } else {
        algo
    };
    let start = Instant::now();
    let mut stats = ResultStats {
        solver: String::new(),
        runtime_ms: 0,
        kernel_vertices_before: None,
        kernel_vertices_after: None,
    };
    let mut trace: Option<Vec<TraceRec>> = None;
    // Decision, witness with the instance it refers to, and witness scope.
    type Outcome = Result<
        (
            bool,
            Option<(Instance, dynce_core::instance::Solution)>,
            &'static str,
        ),
        SolverError,
    >;
    let outcome: Outcome = match algo {
        Algo::Auto => unreachable!(),
        Algo::Oracle => {
            stats.solver = "oracle".into();
            oracle_solve_with_cap(&inst, cap).map(|o| match o {
                SolveOutcome::Yes(sol) => (true, Some((inst.clone(), sol)), "original"),
                SolveOutcome::No => (false, None, "original"),
            })
        }
        Algo::Combined => {
            stats.solver = "combined".into();
            stats.kernel_vertices_before = Some(inst.n());
            solve_combined_with_cap(&inst, cap).map(|o| {
                trace = Some(o.trace().iter().map(TraceRec::from).collect());
                match o {
                    CombinedOutcome::Yes {
                        solution, kernel, ..
                    } => {
                        stats.kernel_vertices_after = Some(kernel.n());
                        (true, Some((kernel, solution)), "kernel")
                    }
                    CombinedOutcome::No { .. } => (false, None, "kernel"),
                }
            })
        }
        Algo::FptK => {
            stats.solver = "fpt-deletion-edge-k".into();
            fpt_deletion_edge_k(&inst).map(|o| match o {
                SolveOutcome::Yes(sol) => (true, Some((inst.clone(), sol)), "original"),
                SolveOutcome::No => (false, None, "original"),
            })
        }
        Algo::FptD => {
            stats.solver = match inst.measure {
                Measure::EdgeDist => "fpt-completion-edge-d",
                Measure::MatchingDist => "fpt-completion-matching-d",
            }
            .into();
            match inst.measure {
                Measure::EdgeDist => fpt_completion_edge_d(&inst),
                Measure::MatchingDist => fpt_completion_matching_d(&inst),
            }
            .map(|o| match o {
                SolveOutcome::Yes(sol) => (true, Some((inst.clone(), sol)), "original"),
                SolveOutcome::No => (false, None, "original"),
            })
        }
    };
    let (decision, witness, scope) = match outcome {
        Ok(x) => x,
        Err(SolverError::TooLarge { n, cap }) => {
            return CmdOutput::error(format!(
                "instance has {n} vertices, above the oracle cap {cap}; raise --cap (or {ORACLE_CAP_ENV}) or pick an FPT algorithm"
            ))
        }
        Err(SolverError::KernelTooLargeForOracle { n, cap }) => {
            return CmdOutput::error(format!(
                "kernel still has {n} vertices, above the oracle cap {cap}; parameters are too large for exact search, raise --cap (or {ORACLE_CAP_ENV})"
            ))
        }
        Err(e) => return CmdOutput::error(e.to_string()),
    };
    stats.runtime_ms = start.elapsed().as_millis() as u64;

    let mut result = ResultFile {
        decision: if decision { "yes" } else { "no" }.into(),
        witness_scope: None,
        witness_clusters: None,
        edits: None,
        stats,
        trace,
    };
    if emit_witness {
        if let Some((base, sol)) = &witness {
            // Any emitted witness must re-verify against the instance it is
            // scoped to.
            match verify_solution(base, sol) {
                Ok(verdict) if verdict.is_valid() => {}
                other => {
                    return CmdOutput::error(format!(
                        "internal: solver witness failed verification ({other:?})"
                    ))
                }
            }
            result.witness_scope = Some(scope.to_string());
            result.witness_clusters = Some(sol.gprime.clusters().to_vec());
            result.edits = Some(edit_records(base, sol));
        }
    }
    let stdout = if json {
        format!("{}\n", serde_json::to_string_pretty(&result).unwrap())
    } else {
        let mut s = format!(
            "decision: {}\nsolver: {}\n",
            result.decision, result.stats.solver
        );
        if let (Some(before), Some(after)) = (
            result.stats.kernel_vertices_before,
            result.stats.kernel_vertices_after,
        ) {
            s.push_str(&format!("kernel: {before} -> {after} vertices\n"));
        }
        if let Some(clusters) = &result.witness_clusters {
            s.push_str(&format!(
                "witness ({}): {clusters:?}\n",
                result.witness_scope.as_deref().unwrap_or("original")
            ));
        }
        s
    };
    CmdOutput {
        exit: if decision { EXIT_YES } else { EXIT_NO },
        stdout,
        stderr: String::new(),
    }
}

pub fn cmd_kernelize(path: &Path, json: bool) -> CmdOutput {
    let inst = match load_instance(path) {
        Ok(inst) => inst,
        Err(e) => return CmdOutput::error(e),
    };
    let before = inst.n();
    let result = kernelize(&inst);
    let trace: Vec<TraceRec> = result.trace.iter().map(TraceRec::from).collect();
    let (report, exit) = match result.outcome {
        KernelOutcome::Reduced(reduced) => {
            let bound = kernel_vertex_bound(reduced.measure, reduced.k, reduced.d);
            (
                KernelizeReport {
                    outcome: "reduced".into(),
                    no_rule: None,
                    vertices_before: before,
                    vertices_after: Some(reduced.n()),
                    bound: Some(bound),
                    reduced: Some(InstanceFile::from_instance(&reduced)),
                    trace,
                },
                EXIT_YES,
            )
        }
        KernelOutcome::No(rule) => (
            KernelizeReport {
                outcome: "no".into(),
                no_rule: Some(rule.as_str().to_string()),
                vertices_before: before,
                vertices_after: None,
                bound: None,
                reduced: None,
                trace,
            },
            EXIT_NO,
        ),
    };
    let stdout = if json {
        format!("{}\n", serde_json::to_string_pretty(&report).unwrap())
    } else {
        let mut s = match (&report.vertices_after, &report.bound) {
            (Some(after), Some(bound)) => format!(
                "reduced: {} -> {after} vertices (bound {bound})\n",
                report.vertices_before
            ),
            _ => format!(
                "decision: no ({})\n",
                report.no_rule.as_deref().unwrap_or("?")
            ),
        };
        for rec in &report.trace {
            s.push_str(&format!("  {}: {}\n", rec.rule, rec.effect));
        }
        s
    };
    CmdOutput {
        exit,
        stdout,
        stderr: String::new(),
    }
}

pub fn cmd_distance(path_a: &Path, path_b: &Path, measure: &str) -> CmdOutput {
    let measure = match parse_measure(measure) {
        Ok(m) => m,
        Err(e) => return CmdOutput::error(e.to_string()),
    };
    let a: ClustersFile = match read_json(path_a) {
        Ok(f) => f,
        Err(e) => return CmdOutput::error(e),
    };
    let b: ClustersFile = match read_json(path_b) {
        Ok(f) => f,
        Err(e) => return CmdOutput::error(e),
    };
    let (a, b) = match (a.to_clusters(), b.to_clusters()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) => return CmdOutput::error(format!("{}: {e}", path_a.display())),
        (_, Err(e)) => return CmdOutput::error(format!("{}: {e}", path_b.display())),
    };
    match distance::distance(measure, &a, &b) {
        Ok(d) => CmdOutput::ok(format!("{d}\n")),
        Err(e) => CmdOutput::error(e.to_string()),
    }
}

pub fn cmd_verify(instance_path: &Path, solution_path: &Path) -> CmdOutput {
    let inst = match load_instance(instance_path) {
        Ok(inst) => inst,
        Err(e) => return CmdOutput::error(e),
    };
    let sol_file: SolutionFile = match read_json(solution_path) {
        Ok(f) => f,
        Err(e) => return CmdOutput::error(e),
    };
    let sol = match sol_file.to_solution(&inst) {
        Ok(s) => s,
        Err(e) => return CmdOutput::error(format!("{}: {e}", solution_path.display())),
    };
    match verify_solution(&inst, &sol) {
        Ok(verdict) if verdict.is_valid() => CmdOutput::ok(format!(
            "valid: {} edits, distance {}\n",
            verdict.edit_count, verdict.distance
        )),
        Ok(verdict) => {
            let reasons: Vec<String> = verdict.failures.iter().map(|r| r.to_string()).collect();
            CmdOutput {
                exit: EXIT_NO,
                stdout: format!(
                    "invalid: {} ({} edits, distance {})\n",
                    reasons.join(", "),
                    verdict.edit_count,
                    verdict.distance
                ),
                stderr: String::new(),
            }
        }
        Err(e) => CmdOutput::error(e.to_string()),
    }
}

/// Family-specific generator parameters, already parsed.
#[derive(Debug, Clone)]
pub enum Family {
    ThreePartition {
        m: usize,
        b: u64,
        a: Vec<u64>,
    },
    X3c {
        q: usize,
        sets: Vec<[usize; 3]>,
    },
    Clique {
        ell: u64,
        n0: usize,
        edges: Vec<(usize, usize)>,
    },
    McClique {
        ell: u64,
        n0: usize,
        edges: Vec<(usize, usize)>,
        colors: Vec<usize>,
    },
    Random {
        n: usize,
        p: f64,
        variant: String,
        measure: String,
        k: i64,
        d: i64,
        seed: u64,
    },
}

pub fn cmd_generate(family: &Family, out: Option<&Path>) -> CmdOutput {
    let built = match family {
        Family::ThreePartition { m, b, a } => ThreePartitionSource::new(*m, *b, a.clone())
            .and_then(|src| gen_3partition_completion_edge(&src)),
        Family::X3c { q, sets } => {
            X3cSource::new(*q, sets.clone()).and_then(|src| gen_x3c_deletion_matching(&src))
        }
        Family::Clique { ell, n0, edges } => Graph::from_edges(*n0, edges.iter().copied())
            .map_err(|e| dynce_core::generators::GeneratorError::InvalidSource(e.to_string()))
            .and_then(|g0| CliqueSource::new(g0, *ell))
            .and_then(|src| gen_clique_editing_edge(&src)),
        Family::McClique {
            ell,
            n0,
            edges,
            colors,
        } => Graph::from_edges(*n0, edges.iter().copied())
            .map_err(|e| dynce_core::generators::GeneratorError::InvalidSource(e.to_string()))
            .and_then(|g0| McCliqueSource::new(g0, colors.clone(), *ell))
            .and_then(|src| gen_mcclique_deletion_edge(&src)),
        Family::Random {
            n,
            p,
            variant,
            measure,
            k,
            d,
            seed,
        } => {
            if !(0.0..=1.0).contains(p) {
                return CmdOutput::error(format!("p: must lie in [0, 1], got {p}"));
            }
            if *k < 0 || *d < 0 {
                return CmdOutput::error("k and d must be nonnegative");
            }
            let variant = match parse_variant(variant) {
                Ok(v) => v,
                Err(e) => return CmdOutput::error(e.to_string()),
            };
            let measure = match parse_measure(measure) {
                Ok(m) => m,
                Err(e) => return CmdOutput::error(e.to_string()),
            };
            Ok(gen_random(*n, *p, variant, measure, *k, *d, *seed))
        }
    };
    let inst = match built {
        Ok(inst) => inst,
        Err(e) => return CmdOutput::error(e.to_string()),
    };
    let json = format!(
        "{}\n",
        serde_json::to_string_pretty(&InstanceFile::from_instance(&inst)).unwrap()
    );
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                return CmdOutput::error(format!("cannot write {}: {e}", path.display()));
            }
            CmdOutput::ok(format!(
                "wrote {} ({} vertices, k = {}, d = {})\n",
                path.display(),
                inst.n(),
                inst.k,
                inst.d
            ))
        }
        None => CmdOutput::ok(json),
    }
}
