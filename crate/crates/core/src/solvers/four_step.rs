//! The generic four-step engine: split the graph into non-interacting
//! parts, encode the representative per-part solutions as (cost, gain)
//! tuples, assemble them with a multi-choice knapsack, and rebuild a global
//! witness from the selected per-part edits.

use super::{SolveOutcome, SolverError};
use crate::graph::{to_cluster_graph, Graph};
use crate::instance::{Instance, Solution};
use crate::mck::{solve_mck, MckInstance, MckItem, MckOutcome};
use std::collections::BTreeSet;

/// One representative per-part solution: its cost (number of local edits),
/// its gain (problem-specific profit), and the local edit set realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tuple {
    pub cost: u64,
    pub gain: i64,
    pub witness: BTreeSet<(usize, usize)>,
}

/// The tuples of one part.
#[derive(Debug, Clone)]
pub struct TupleSet {
    pub part_id: usize,
    pub tuples: Vec<Tuple>,
}

/// Keeps, per cost, only the best gain (and drops dominated tuples). The
/// decision is unchanged; witnesses of surviving tuples are kept.
pub fn pareto_prune(mut tuples: Vec<Tuple>) -> Vec<Tuple> {
    tuples.sort_by(|a, b| (a.cost, b.gain).cmp(&(b.cost, a.gain)));
    let mut kept: Vec<Tuple> = Vec::new();
    for t in tuples {
        match kept.last() {
            Some(last) if last.cost == t.cost => continue,
            Some(last) if last.gain >= t.gain => continue,
            _ => kept.push(t),
        }
    }
    kept
}

/// Runs steps three and four: an MCK instance with weight budget `k` and
/// profit target `p_target`, one group per part. On success the witness is
/// assembled by applying the union of the selected per-part edit sets.
///
/// Parts must be vertex-disjoint and no edge of the instance graph may
/// connect a part to anything outside it.
pub fn four_step_drive(
    parts: &[Vec<usize>],
    tuple_sets: &[TupleSet],
    inst: &Instance,
    p_target: i64,
) -> Result<SolveOutcome, SolverError> {
    if parts.len() != tuple_sets.len() {
        return Err(SolverError::MalformedParts(format!(
            "{} parts but {} tuple sets",
            parts.len(),
            tuple_sets.len()
        )));
    }
    let n = inst.n();
    let mut part_of = vec![usize::MAX; n];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            if v >= n {
                return Err(SolverError::MalformedParts(format!(
                    "part {i} contains out-of-range vertex {v}"
                )));
            }
            if part_of[v] != usize::MAX {
                return Err(SolverError::MalformedParts(format!(
                    "vertex {v} lies in two parts"
                )));
            }
            part_of[v] = i;
        }
    }
    for (u, v) in inst.g.edges() {
        if (part_of[u] != part_of[v]) && (part_of[u] != usize::MAX || part_of[v] != usize::MAX) {
            return Err(SolverError::MalformedParts(format!(
                "edge {{{u},{v}}} crosses part boundaries"
            )));
        }
    }
    #[cfg(debug_assertions)]
    for (ts, part) in tuple_sets.iter().zip(parts) {
        for t in &ts.tuples {
            debug_assert_eq!(t.cost, t.witness.len() as u64, "tuple cost out of sync");
            for &(u, v) in &t.witness {
                debug_assert!(u < v);
                debug_assert!(
                    part.contains(&u) && part.contains(&v),
                    "tuple witness leaves its part"
                );
                match inst.variant {
                    crate::instance::Variant::Editing => {}
                    crate::instance::Variant::Deletion => debug_assert!(inst.g.has_edge(u, v)),
                    crate::instance::Variant::Completion => {
                        debug_assert!(!inst.g.has_edge(u, v))
                    }
                }
            }
        }
    }

    if inst.k < 0 {
        return Ok(SolveOutcome::No);
    }
    let mck = MckInstance {
        groups: tuple_sets
            .iter()
            .map(|ts| {
                ts.tuples
                    .iter()
                    .map(|t| MckItem {
                        weight: t.cost,
                        profit: t.gain,
                    })
                    .collect()
            })
            .collect(),
        capacity: inst.k as u64,
        target: p_target,
    };
    let selection = match solve_mck(&mck) {
        MckOutcome::Yes(sel) => sel,
        MckOutcome::No => return Ok(SolveOutcome::No),
    };

    let mut edits: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (ts, &idx) in tuple_sets.iter().zip(&selection) {
        edits.extend(ts.tuples[idx].witness.iter().copied());
    }
    let mut edges: BTreeSet<(usize, usize)> = inst.g.edges().collect();
    for &e in &edits {
        if !edges.insert(e) {
            edges.remove(&e);
        }
    }
    let g2 = Graph::from_edges(n, edges).expect("edited edges stay valid");
    let gprime = to_cluster_graph(&g2).map_err(|e| {
        SolverError::ContractViolation(format!("selected tuples do not form a cluster graph: {e}"))
    })?;
    Ok(SolveOutcome::Yes(Solution::new(&inst.g, gprime)?))
}
