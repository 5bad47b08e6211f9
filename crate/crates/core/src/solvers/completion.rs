//! Fixed-parameter solvers for the completion variants, parameterized by
//! the distance bound.
//!
//! Completion can never split a connected component, so every component is
//! first completed into a clique and the insertions are charged against the
//! budget. The cliques of the normalized graph are then grouped by their
//! best-matching target cluster; only cliques of the same group ever need
//! to be merged, which bounds the per-group choices in a function of `d`
//! and lets the multi-choice knapsack assemble a global answer.

use super::four_step::{four_step_drive, pareto_prune, Tuple, TupleSet};
use super::{SolveOutcome, SolverError};
use crate::distance::graph_cluster_edge_distance;
use crate::graph::{to_cluster_graph, ClusterGraph, Graph};
use crate::instance::{Instance, Measure, Solution, Variant};
use std::collections::{BTreeMap, BTreeSet};

fn require(
    inst: &Instance,
    variant: Variant,
    measure: Option<Measure>,
    expected: &str,
) -> Result<(), SolverError> {
    if inst.variant != variant || measure.is_some_and(|m| inst.measure != m) {
        return Err(SolverError::WrongVariant {
            expected: expected.into(),
            got: format!("{} / {}-based distance", inst.variant, inst.measure),
        });
    }
    Ok(())
}

/// Completes every connected component into a clique, charging the
/// insertions to the budget. The result is an equivalent instance whose
/// graph is a cluster graph; if the forced insertions already exceed the
/// budget the returned instance carries a negative budget (a canonical NO
/// marker caught by the trivial reduction rule).
pub fn normalize_completion(inst: &Instance) -> Result<Instance, SolverError> {
    normalize_completion_with_edits(inst).map(|(out, _)| out)
}

fn normalize_completion_with_edits(
    inst: &Instance,
) -> Result<(Instance, BTreeSet<(usize, usize)>), SolverError> {
    require(inst, Variant::Completion, None, "completion")?;
    let mut edits = BTreeSet::new();
    let mut edges: Vec<(usize, usize)> = inst.g.edges().collect();
    for comp in inst.g.components() {
        for (i, &u) in comp.iter().enumerate() {
            for &v in &comp[i + 1..] {
                if !inst.g.has_edge(u, v) {
                    edits.insert((u, v));
                    edges.push((u, v));
                }
            }
        }
    }
    let g = Graph::from_edges(inst.n(), edges).expect("completion edges are valid");
    let out = Instance::new(
        inst.variant,
        inst.measure,
        g,
        inst.gc.clone(),
        inst.k - edits.len() as i64,
        inst.d,
    )?;
    Ok((out, edits))
}

/// For each clique of `cliques_of_g`, its majority home: the target cluster
/// holding strictly more than half of the clique's vertices, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMap {
    values: Vec<Option<usize>>,
}

impl TMap {
    /// Majority home of clique `i`, or `None` when no target cluster holds a
    /// strict majority (an exactly-half overlap does not count).
    pub fn value(&self, clique: usize) -> Option<usize> {
        self.values[clique]
    }

    pub fn values(&self) -> &[Option<usize>] {
        &self.values
    }
}

pub fn t_map(cliques_of_g: &ClusterGraph, gc: &ClusterGraph) -> Result<TMap, SolverError> {
    if cliques_of_g.n() != gc.n() {
        return Err(SolverError::Instance(
            crate::instance::InstanceError::SizeMismatch {
                graph: cliques_of_g.n(),
                clusters: gc.n(),
            },
        ));
    }
    let values = cliques_of_g
        .clusters()
        .iter()
        .map(|clique| majority_home(clique, gc))
        .collect();
    Ok(TMap { values })
}

fn majority_home(vertices: &[usize], gc: &ClusterGraph) -> Option<usize> {
    let mut overlaps: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in vertices {
        *overlaps.entry(gc.cluster_of(v)).or_insert(0) += 1;
    }
    overlaps
        .into_iter()
        .find(|&(_, count)| 2 * count > vertices.len())
        .map(|(cluster, _)| cluster)
}

/// Cross-edge balance check: for disjoint cliques `c0` and `others` of a
/// cluster graph whose majority homes are distinct from `c0`'s (or where
/// `c0` has none), the cross pairs contain at most as many target edges as
/// target non-edges. Returns `(|E* ∩ E_c|, |E* \ E_c|)`.
pub fn tmap_merge_inequality(
    c0: &[usize],
    others: &[Vec<usize>],
    gc: &ClusterGraph,
) -> Result<(u64, u64), SolverError> {
    let mut seen = BTreeSet::new();
    for &v in c0.iter().chain(others.iter().flatten()) {
        if v >= gc.n() {
            return Err(SolverError::PreconditionViolated(format!(
                "vertex {v} out of range"
            )));
        }
        if !seen.insert(v) {
            return Err(SolverError::PreconditionViolated(format!(
                "cliques are not disjoint: vertex {v} repeats"
            )));
        }
    }
    if c0.is_empty() || others.is_empty() || others.iter().any(|c| c.is_empty()) {
        return Err(SolverError::PreconditionViolated(
            "cliques must be non-empty".into(),
        ));
    }
    let home = majority_home(c0, gc);
    if home.is_some() && others.iter().any(|c| majority_home(c, gc) == home) {
        return Err(SolverError::PreconditionViolated(
            "some other clique shares c0's majority home".into(),
        ));
    }
    let mut inside = 0u64;
    let mut total = 0u64;
    for &u in c0 {
        for v in others.iter().flatten().copied() {
            total += 1;
            if gc.same_cluster(u, v) {
                inside += 1;
            }
        }
    }
    Ok((inside, total - inside))
}

/// Completion with edge-based distance, FPT in `d`.
pub fn fpt_completion_edge_d(inst: &Instance) -> Result<SolveOutcome, SolverError> {
    require(
        inst,
        Variant::Completion,
        Some(Measure::EdgeDist),
        "completion / edge-based distance",
    )?;
    if inst.k < 0 || inst.d < 0 {
        return Ok(SolveOutcome::No);
    }
    let (norm, _forced) = normalize_completion_with_edits(inst)?;
    let k = norm.k;
    if k < 0 {
        return Ok(SolveOutcome::No);
    }
    let mut d = norm.d;

    // Oversized cliques are untouchable: drop them, charging the symmetric
    // difference they pin down against `d` (the edge-distance large-clique
    // reduction rule, applied exhaustively).
    let cliques = to_cluster_graph(&norm.g).expect("normalized graph is a cluster graph");
    let mut alive = vec![true; norm.n()];
    let mut dead_cliques = vec![false; cliques.cluster_count()];
    while let Some(big) = (0..cliques.cluster_count())
        .find(|&i| !dead_cliques[i] && cliques.cluster(i).len() as i64 > k + 1)
    {
        let keep: Vec<usize> = (0..norm.n()).filter(|&v| alive[v]).collect();
        let gc_alive = inst.gc.restrict(&keep);
        let clique_alive: Vec<usize> = cliques
            .cluster(big)
            .iter()
            .map(|&v| keep.binary_search(&v).expect("clique is alive"))
            .collect();
        let pairs = |s: u64| (s * s.saturating_sub(1) / 2) as i64;
        let mut overlaps: BTreeMap<usize, u64> = BTreeMap::new();
        for &v in &clique_alive {
            *overlaps.entry(gc_alive.cluster_of(v)).or_insert(0) += 1;
        }
        let mut e_c = 0i64;
        let mut outside = 0i64;
        for (id, cluster) in gc_alive.clusters().iter().enumerate() {
            let sz = cluster.len() as u64;
            e_c += pairs(sz);
            outside += pairs(sz - overlaps.get(&id).copied().unwrap_or(0));
        }
        let in_c: i64 = overlaps.values().map(|&c| pairs(c)).sum();
        d -= e_c + pairs(clique_alive.len() as u64) - 2 * in_c - outside;
        if d < 0 {
            return Ok(SolveOutcome::No);
        }
        dead_cliques[big] = true;
        for &v in cliques.cluster(big) {
            alive[v] = false;
        }
    }

    let keep: Vec<usize> = (0..norm.n()).filter(|&v| alive[v]).collect();
    let g_view = norm.g.induced(&keep);
    let gc_view = inst.gc.restrict(&keep);
    let cliques_view = to_cluster_graph(&g_view).expect("still a cluster graph");
    let tmap = t_map(&cliques_view, &gc_view)?;

    // Group cliques by majority home; homeless cliques are never merged.
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..cliques_view.cluster_count() {
        if let Some(home) = tmap.value(i) {
            groups.entry(home).or_default().push(i);
        }
    }
    let mut parts = Vec::new();
    let mut tuple_sets = Vec::new();
    for (_, members) in groups {
        let vertices: Vec<usize> = members
            .iter()
            .flat_map(|&i| cliques_view.cluster(i).iter().copied())
            .collect();
        let tuples = if members.len() as i64 <= d + 1 {
            // All ways to partition the member cliques and merge each block.
            let mut tuples = Vec::new();
            super::for_each_partition(members.len(), |assign| {
                if let Some(t) =
                    merge_tuple_edge(&cliques_view, &gc_view, &members, assign, k as u64)
                {
                    tuples.push(t);
                }
                true
            });
            tuples
        } else {
            // Too many cliques sharing the home: they all must merge.
            let all = vec![0usize; members.len()];
            merge_tuple_edge(&cliques_view, &gc_view, &members, &all, u64::MAX)
                .into_iter()
                .collect()
        };
        if tuples.is_empty() {
            return Ok(SolveOutcome::No);
        }
        parts.push({
            let mut vs = vertices;
            vs.sort_unstable();
            vs
        });
        tuple_sets.push(TupleSet {
            part_id: parts.len() - 1,
            tuples: pareto_prune(tuples),
        });
    }
    let p_target = graph_cluster_edge_distance(&g_view, &gc_view) as i64 - d;
    let current = Instance::new(
        Variant::Completion,
        Measure::EdgeDist,
        g_view,
        gc_view,
        k,
        d,
    )?;
    let local = match four_step_drive(&parts, &tuple_sets, &current, p_target)? {
        SolveOutcome::Yes(sol) => sol,
        SolveOutcome::No => return Ok(SolveOutcome::No),
    };
    // Lift the view edits back to original vertex ids; dropped cliques and
    // forced completion edges are restored by re-deriving the partition.
    let mut edges: Vec<(usize, usize)> = norm.g.edges().collect();
    for &(u, v) in &local.edits {
        edges.push((keep[u], keep[v]));
    }
    let g_final = Graph::from_edges(inst.n(), edges).expect("lifted edits are valid");
    let gprime = to_cluster_graph(&g_final).expect("lifted solution is a cluster graph");
    let sol = Solution::new(&inst.g, gprime)?;
    debug_assert!(crate::instance::verify_solution(inst, &sol)
        .expect("same vertex count")
        .is_valid());
    Ok(SolveOutcome::Yes(sol))
}

/// Tuple for merging the member cliques of one group according to a block
/// assignment, under edge-distance gains: an inserted target edge helps, an
/// inserted non-target edge hurts.
fn merge_tuple_edge(
    cliques: &ClusterGraph,
    gc: &ClusterGraph,
    members: &[usize],
    assign: &[usize],
    budget: u64,
) -> Option<Tuple> {
    let mut witness = BTreeSet::new();
    let mut gain = 0i64;
    for (a, &ca) in members.iter().enumerate() {
        for (b, &cb) in members.iter().enumerate().skip(a + 1) {
            if assign[a] != assign[b] {
                continue;
            }
            for &u in cliques.cluster(ca) {
                for &v in cliques.cluster(cb) {
                    let pair = if u < v { (u, v) } else { (v, u) };
                    witness.insert(pair);
                    gain += if gc.same_cluster(u, v) { 1 } else { -1 };
                }
            }
        }
    }
    if witness.len() as u64 > budget {
        return None;
    }
    Some(Tuple {
        cost: witness.len() as u64,
        gain,
        witness,
    })
}

/// Completion with matching-based distance, FPT in `d`.
///
/// Cliques spanning several target clusters are few (more than `d` is an
/// immediate no). A search tree guesses, for each spanning clique, the
/// target cluster its final block is matched to (or none); per guess the
/// per-cluster groups are assembled independently. Tuple profits are the
/// matching weight the group's merged block secures with its cluster, and
/// the knapsack target `|V| - d` bounds the total matching distance.
pub fn fpt_completion_matching_d(inst: &Instance) -> Result<SolveOutcome, SolverError> {
    require(
        inst,
        Variant::Completion,
        Some(Measure::MatchingDist),
        "completion / matching-based distance",
    )?;
    if inst.k < 0 || inst.d < 0 {
        return Ok(SolveOutcome::No);
    }
    let (norm, _forced) = normalize_completion_with_edits(inst)?;
    let k = norm.k;
    if k < 0 {
        return Ok(SolveOutcome::No);
    }
    let d = norm.d;
    let cliques = to_cluster_graph(&norm.g).expect("normalized graph is a cluster graph");

    // Classify cliques: contained in one target cluster vs spanning several.
    let mut contained: Vec<(usize, usize)> = Vec::new(); // (clique, home cluster)
    let mut spanning: Vec<usize> = Vec::new();
    let mut spanning_targets: Vec<Vec<usize>> = Vec::new();
    for i in 0..cliques.cluster_count() {
        let mut overlaps: BTreeMap<usize, u64> = BTreeMap::new();
        for &v in cliques.cluster(i) {
            *overlaps.entry(inst.gc.cluster_of(v)).or_insert(0) += 1;
        }
        if overlaps.len() == 1 {
            contained.push((i, *overlaps.keys().next().unwrap()));
        } else {
            // Each spanning clique leaves at least one vertex unmatched; too
            // many of them (or too many touched clusters) exceed `d`.
            if overlaps.len() as i64 > d + 1 {
                return Ok(SolveOutcome::No);
            }
            spanning_targets.push(overlaps.keys().copied().collect());
            spanning.push(i);
        }
    }
    if spanning.len() as i64 > d {
        return Ok(SolveOutcome::No);
    }

    let p_target = inst.n() as i64 - d;
    let current = Instance::new(
        Variant::Completion,
        Measure::MatchingDist,
        norm.g.clone(),
        inst.gc.clone(),
        k,
        d,
    )?;

    // Branch over all meaningful target assignments of the spanning cliques.
    let mut assignment: Vec<Option<usize>> = vec![None; spanning.len()];
    branch(
        inst,
        &current,
        &cliques,
        &contained,
        &spanning,
        &spanning_targets,
        &mut assignment,
        0,
        k,
        d,
        p_target,
    )
}

#[allow(clippy::too_many_arguments)]
fn branch(
    original: &Instance,
    current: &Instance,
    cliques: &ClusterGraph,
    contained: &[(usize, usize)],
    spanning: &[usize],
    spanning_targets: &[Vec<usize>],
    assignment: &mut Vec<Option<usize>>,
    depth: usize,
    k: i64,
    d: i64,
    p_target: i64,
) -> Result<SolveOutcome, SolverError> {
    if depth < spanning.len() {
        for &target in &spanning_targets[depth] {
            assignment[depth] = Some(target);
            let res = branch(
                original,
                current,
                cliques,
                contained,
                spanning,
                spanning_targets,
                assignment,
                depth + 1,
                k,
                d,
                p_target,
            )?;
            if res.is_yes() {
                return Ok(res);
            }
        }
        assignment[depth] = None;
        return branch(
            original,
            current,
            cliques,
            contained,
            spanning,
            spanning_targets,
            assignment,
            depth + 1,
            k,
            d,
            p_target,
        );
    }

    // Build per-cluster groups for this assignment.
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new(); // cluster -> (contained, assigned spanning)
    for &(clique, home) in contained {
        groups.entry(home).or_default().0.push(clique);
    }
    for (i, &clique) in spanning.iter().enumerate() {
        if let Some(target) = assignment[i] {
            groups.entry(target).or_default().1.push(clique);
        }
    }

    let mut parts = Vec::new();
    let mut tuple_sets = Vec::new();
    for (home, (contained_members, spanning_members)) in groups {
        let tuples = matching_group_tuples(
            cliques,
            &original.gc,
            home,
            &contained_members,
            &spanning_members,
            k as u64,
            d,
        );
        if tuples.is_empty() {
            return Ok(SolveOutcome::No);
        }
        let mut vertices: Vec<usize> = contained_members
            .iter()
            .chain(&spanning_members)
            .flat_map(|&i| cliques.cluster(i).iter().copied())
            .collect();
        vertices.sort_unstable();
        parts.push(vertices);
        tuple_sets.push(TupleSet {
            part_id: parts.len() - 1,
            tuples: pareto_prune(tuples),
        });
    }
    match four_step_drive(&parts, &tuple_sets, current, p_target)? {
        SolveOutcome::Yes(local) => {
            let sol = Solution::new(&original.g, local.gprime)?;
            #[cfg(debug_assertions)]
            {
                let verdict =
                    crate::instance::verify_solution(original, &sol).expect("same vertex count");
                debug_assert!(verdict.is_valid(), "assembled witness fails verification");
                debug_assert!(
                    crate::distance::matching_distance(&sol.gprime, &original.gc).unwrap() as i64
                        <= original.d
                );
            }
            Ok(SolveOutcome::Yes(sol))
        }
        SolveOutcome::No => Ok(SolveOutcome::No),
    }
}

/// Tuples of one matching-distance group: the assigned spanning cliques and
/// all oversized contained cliques always merge into the main block; for
/// the small contained cliques every multiset of unmerged sizes totalling
/// at most `d` is representative (which cliques of equal size stay out does
/// not change cost or profit). Profit is the weight the target cluster can
/// recover: the merged block's overlap, or the largest unmerged clique.
fn matching_group_tuples(
    cliques: &ClusterGraph,
    gc: &ClusterGraph,
    home: usize,
    contained_members: &[usize],
    spanning_members: &[usize],
    budget: u64,
    d: i64,
) -> Vec<Tuple> {
    let overlap_with_home = |clique: usize| -> u64 {
        cliques
            .cluster(clique)
            .iter()
            .filter(|&&v| gc.cluster_of(v) == home)
            .count() as u64
    };
    let mut mandatory: Vec<usize> = spanning_members.to_vec();
    let mut smalls: Vec<usize> = Vec::new();
    for &c in contained_members {
        if cliques.cluster(c).len() as i64 > d {
            mandatory.push(c);
        } else {
            smalls.push(c);
        }
    }
    // Small cliques bucketed by size; unmerged counts are chosen per size.
    let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &c in &smalls {
        by_size.entry(cliques.cluster(c).len()).or_default().push(c);
    }
    let size_buckets: Vec<(usize, Vec<usize>)> = by_size.into_iter().collect();

    let mut tuples = Vec::new();
    let mut unmerged_counts = vec![0usize; size_buckets.len()];
    enumerate_patterns(
        &size_buckets,
        0,
        0,
        d as usize,
        &mut unmerged_counts,
        &mut |counts| {
            let mut merged: Vec<usize> = mandatory.clone();
            let mut best_unmerged = 0usize;
            for ((size, bucket), &out) in size_buckets.iter().zip(counts.iter()) {
                // The last `out` cliques of this size stay unmerged.
                merged.extend(&bucket[..bucket.len() - out]);
                if out > 0 {
                    best_unmerged = best_unmerged.max(*size);
                }
            }
            let mut cost = 0u64;
            let mut witness = BTreeSet::new();
            for (a, &ca) in merged.iter().enumerate() {
                for &cb in &merged[a + 1..] {
                    for &u in cliques.cluster(ca) {
                        for &v in cliques.cluster(cb) {
                            witness.insert(if u < v { (u, v) } else { (v, u) });
                        }
                    }
                }
            }
            cost += witness.len() as u64;
            if cost > budget {
                return;
            }
            let block_overlap: u64 = merged.iter().map(|&c| overlap_with_home(c)).sum();
            let profit = block_overlap.max(best_unmerged as u64) as i64;
            tuples.push(Tuple {
                cost,
                gain: profit,
                witness,
            });
        },
    );
    tuples
}

/// All choices of how many cliques per size bucket stay unmerged, with the
/// total unmerged vertex count bounded by `budget_d`.
fn enumerate_patterns(
    buckets: &[(usize, Vec<usize>)],
    idx: usize,
    used: usize,
    budget_d: usize,
    counts: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if idx == buckets.len() {
        emit(counts);
        return;
    }
    let (size, members) = &buckets[idx];
    let max_out = if *size == 0 {
        0
    } else {
        members.len().min((budget_d - used) / size)
    };
    for out in 0..=max_out {
        counts[idx] = out;
        enumerate_patterns(buckets, idx + 1, used + out * size, budget_d, counts, emit);
    }
    counts[idx] = 0;
}
