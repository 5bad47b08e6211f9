//! Fixed-parameter solver for the deletion variant with edge-based
//! distance, parameterized by the budget.
//!
//! After the classic heavy-pair rules, the vertices lying in induced P3s
//! form one part with no edge to the rest, and the remaining components are
//! cliques, each its own part. Per part, all partitions into cliques of
//! cost at most `k` are enumerated as (cost, gain) tuples and assembled via
//! the multi-choice knapsack with profit target `|E ⊕ E_c| - d`.

use super::four_step::{four_step_drive, pareto_prune, Tuple, TupleSet};
use super::{SolveOutcome, SolverError};
use crate::distance::graph_cluster_edge_distance;
use crate::graph::{enumerate_p3_pairs, Graph};
use crate::instance::{Instance, Measure, Solution, Variant};
use std::collections::BTreeSet;

pub fn fpt_deletion_edge_k(inst: &Instance) -> Result<SolveOutcome, SolverError> {
    if inst.variant != Variant::Deletion || inst.measure != Measure::EdgeDist {
        return Err(SolverError::WrongVariant {
            expected: "deletion / edge-based distance".into(),
            got: format!("{} / {}-based distance", inst.variant, inst.measure),
        });
    }
    if inst.k < 0 || inst.d < 0 {
        return Ok(SolveOutcome::No);
    }

    // Classic heavy-pair phase, deletion flavor: forced deletions are part
    // of every solution; a heavy non-edge is a dead end.
    let mut g = inst.g.clone();
    let mut k = inst.k;
    let stats = loop {
        if k < 0 {
            return Ok(SolveOutcome::No);
        }
        let stats = enumerate_p3_pairs(&g);
        let threshold = (k + 1) as u64;
        let heavy_edge = stats
            .pairs()
            .find(|&((u, v), c)| c >= threshold && g.has_edge(u, v));
        if let Some(((u, v), _)) = heavy_edge {
            let edges = g.edges().filter(|&e| e != (u, v)).collect::<Vec<_>>();
            g = Graph::from_edges(g.n(), edges).expect("deleting an edge keeps the graph valid");
            k -= 1;
            continue;
        }
        if stats
            .pairs()
            .any(|((u, v), c)| c >= threshold && !g.has_edge(u, v))
        {
            return Ok(SolveOutcome::No);
        }
        break stats;
    };
    if stats.p3_vertices().len() as i64 > k * k + 2 * k {
        return Ok(SolveOutcome::No);
    }

    // Parts: the P3 region, then each remaining clique.
    let p3_region: Vec<usize> = stats.p3_vertices().iter().copied().collect();
    let in_region: BTreeSet<usize> = p3_region.iter().copied().collect();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    if !p3_region.is_empty() {
        parts.push(p3_region);
    }
    for comp in g.components() {
        if !comp.iter().any(|v| in_region.contains(v)) {
            parts.push(comp);
        }
    }

    let current = Instance::new(
        inst.variant,
        inst.measure,
        g.clone(),
        inst.gc.clone(),
        k,
        inst.d,
    )?;
    let mut tuple_sets = Vec::with_capacity(parts.len());
    for (part_id, part) in parts.iter().enumerate() {
        let tuples = deletion_tuples(&g, &inst.gc, part, k as u64);
        tuple_sets.push(TupleSet {
            part_id,
            tuples: pareto_prune(tuples),
        });
    }
    let p_target = graph_cluster_edge_distance(&g, &inst.gc) as i64 - inst.d;
    match four_step_drive(&parts, &tuple_sets, &current, p_target)? {
        SolveOutcome::Yes(local) => {
            // Lift over the forced deletions of the classic phase.
            let sol = Solution::new(&inst.g, local.gprime)?;
            debug_assert!(crate::instance::verify_solution(inst, &sol)
                .expect("same vertex count")
                .is_valid());
            Ok(SolveOutcome::Yes(sol))
        }
        SolveOutcome::No => Ok(SolveOutcome::No),
    }
}

/// All deletion sets of cost at most `budget` turning `g[part]` into a
/// cluster graph, one tuple per partition of the part into cliques.
fn deletion_tuples(
    g: &Graph,
    gc: &crate::graph::ClusterGraph,
    part: &[usize],
    budget: u64,
) -> Vec<Tuple> {
    debug_assert!(part.len() <= 64, "part enumeration uses 64-bit masks");
    let adjacency: Vec<u64> = part
        .iter()
        .map(|&u| {
            let mut mask = 0u64;
            for (j, &v) in part.iter().enumerate() {
                if g.has_edge(u, v) {
                    mask |= 1 << j;
                }
            }
            mask
        })
        .collect();
    let mut tuples = Vec::new();
    let mut assign = vec![0usize; part.len()];
    let mut members: Vec<u64> = Vec::new();
    // Assign part vertices to clique blocks; the deleted edges are exactly
    // the part edges crossing blocks.
    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &Graph,
        gc: &crate::graph::ClusterGraph,
        part: &[usize],
        adjacency: &[u64],
        assign: &mut Vec<usize>,
        members: &mut Vec<u64>,
        i: usize,
        cost_so_far: u64,
        budget: u64,
        tuples: &mut Vec<Tuple>,
    ) {
        if i == part.len() {
            let mut witness = BTreeSet::new();
            let mut gain = 0i64;
            for (a, &u) in part.iter().enumerate() {
                for (b, &v) in part.iter().enumerate().skip(a + 1) {
                    if assign[a] != assign[b] && g.has_edge(u, v) {
                        let pair = if u < v { (u, v) } else { (v, u) };
                        witness.insert(pair);
                        gain += if gc.same_cluster(u, v) { -1 } else { 1 };
                    }
                }
            }
            tuples.push(Tuple {
                cost: witness.len() as u64,
                gain,
                witness,
            });
            return;
        }
        for block in 0..=members.len() {
            if block < members.len() && members[block] & !adjacency[i] != 0 {
                continue;
            }
            // Edges from i to earlier vertices outside `block` get deleted.
            let outside_degree = (adjacency[i] & ((1u64 << i) - 1)).count_ones() as u64;
            let inside = if block < members.len() {
                (adjacency[i] & members[block]).count_ones() as u64
            } else {
                0
            };
            let cost = cost_so_far + outside_degree - inside;
            if cost > budget {
                continue;
            }
            if block < members.len() {
                members[block] |= 1 << i;
                assign[i] = block;
                go(
                    g,
                    gc,
                    part,
                    adjacency,
                    assign,
                    members,
                    i + 1,
                    cost,
                    budget,
                    tuples,
                );
                members[block] &= !(1 << i);
            } else {
                members.push(1 << i);
                assign[i] = block;
                go(
                    g,
                    gc,
                    part,
                    adjacency,
                    assign,
                    members,
                    i + 1,
                    cost,
                    budget,
                    tuples,
                );
                members.pop();
            }
        }
    }
    go(
        g,
        gc,
        part,
        &adjacency,
        &mut assign,
        &mut members,
        0,
        0,
        budget,
        &mut tuples,
    );
    tuples
}
