//! Ground-truth oracle: exhaustive search over candidate target partitions.

use super::{for_each_partition, SolveOutcome, SolverError};
use crate::distance;
use crate::graph::ClusterGraph;
use crate::instance::{Instance, Solution, Variant};

/// Default vertex cap for the oracle; Bell(11) is still comfortable.
pub const DEFAULT_ORACLE_CAP: usize = 11;

/// Brute-force decision with witness, enumerating:
/// * Editing: all set partitions of the vertex set,
/// * Deletion: all partitions into cliques of `g`,
/// * Completion: all partitions into unions of connected components of `g`.
///
/// Among feasible candidates, the returned witness minimizes
/// `(|edits|, distance)` lexicographically; ties go to the first candidate
/// in enumeration order.
pub fn oracle_solve(inst: &Instance) -> Result<SolveOutcome, SolverError> {
    oracle_solve_with_cap(inst, DEFAULT_ORACLE_CAP)
}

pub fn oracle_solve_with_cap(inst: &Instance, cap: usize) -> Result<SolveOutcome, SolverError> {
    let n = inst.n();
    if n > cap {
        return Err(SolverError::TooLarge { n, cap });
    }
    let mut best: Option<(u64, u64, Vec<usize>)> = None;
    let mut consider = |assign: &[usize]| {
        let cand = ClusterGraph::from_assignment(assign);
        let mut shared = 0u64;
        for (u, v) in inst.g.edges() {
            if cand.same_cluster(u, v) {
                shared += 1;
            }
        }
        let cost = (cand.intra_pair_count() - shared) + (inst.g.edge_count() as u64 - shared);
        if (cost as i64) > inst.k {
            return true;
        }
        let dist = distance::distance(inst.measure, &cand, &inst.gc)
            .expect("candidate has the instance's vertex count");
        if (dist as i64) > inst.d {
            return true;
        }
        if best
            .as_ref()
            .is_none_or(|(bc, bd, _)| (cost, dist) < (*bc, *bd))
        {
            best = Some((cost, dist, assign.to_vec()));
        }
        true
    };
    match inst.variant {
        Variant::Editing => for_each_partition(n, |assign| consider(assign)),
        Variant::Deletion => for_each_clique_partition(inst, |assign| consider(assign)),
        Variant::Completion => {
            let comps = inst.g.components();
            let t = comps.len();
            let mut assign = vec![0usize; n];
            for_each_partition(t, |comp_assign| {
                for (ci, comp) in comps.iter().enumerate() {
                    for &v in comp {
                        assign[v] = comp_assign[ci];
                    }
                }
                consider(&assign)
            });
        }
    }
    match best {
        Some((_, _, assign)) => {
            let sol = Solution::new(&inst.g, ClusterGraph::from_assignment(&assign))?;
            Ok(SolveOutcome::Yes(sol))
        }
        None => Ok(SolveOutcome::No),
    }
}

/// Enumerates partitions of the vertex set whose blocks are cliques of `g`,
/// pruning blocks as they are built.
fn for_each_clique_partition(inst: &Instance, mut visit: impl FnMut(&[usize]) -> bool) {
    let n = inst.n();
    if n == 0 {
        visit(&[]);
        return;
    }
    debug_assert!(n <= 64, "clique-partition enumeration uses 64-bit masks");
    let adjacency: Vec<u64> = (0..n)
        .map(|u| {
            inst.g
                .neighbors(u)
                .iter()
                .fold(0u64, |mask, &v| mask | (1 << v))
        })
        .collect();
    let mut assign = vec![0usize; n];
    let mut members: Vec<u64> = vec![1]; // block 0 = {vertex 0}
    fn go(
        adjacency: &[u64],
        assign: &mut Vec<usize>,
        members: &mut Vec<u64>,
        i: usize,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == assign.len() {
            return visit(assign);
        }
        for block in 0..=members.len() {
            if block < members.len() {
                // Joining keeps the block a clique only if `i` sees them all.
                if members[block] & !adjacency[i] != 0 {
                    continue;
                }
                members[block] |= 1 << i;
                assign[i] = block;
                let ok = go(adjacency, assign, members, i + 1, visit);
                members[block] &= !(1 << i);
                if !ok {
                    return false;
                }
            } else {
                members.push(1 << i);
                assign[i] = block;
                let ok = go(adjacency, assign, members, i + 1, visit);
                members.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    go(&adjacency, &mut assign, &mut members, 1, &mut visit);
}
