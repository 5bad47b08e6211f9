//! Maximum-weight bipartite matching via the Hungarian algorithm.

use std::collections::BTreeMap;

/// A weighted bipartite graph with `left_count` x `right_count` vertices.
/// Absent weights are zero; all weights are nonnegative.
#[derive(Debug, Clone, Default)]
pub struct WeightedBipartite {
    left_count: usize,
    right_count: usize,
    weight: BTreeMap<(usize, usize), u64>,
}

impl WeightedBipartite {
    pub fn new(left_count: usize, right_count: usize) -> Self {
        WeightedBipartite {
            left_count,
            right_count,
            weight: BTreeMap::new(),
        }
    }

    pub fn set_weight(&mut self, left: usize, right: usize, w: u64) {
        assert!(left < self.left_count && right < self.right_count);
        if w == 0 {
            self.weight.remove(&(left, right));
        } else {
            self.weight.insert((left, right), w);
        }
    }

    pub fn weight(&self, left: usize, right: usize) -> u64 {
        self.weight.get(&(left, right)).copied().unwrap_or(0)
    }

    pub fn left_count(&self) -> usize {
        self.left_count
    }

    pub fn right_count(&self) -> usize {
        self.right_count
    }
}

/// Maximum total weight over all matchings, together with a matching that
/// attains it. Only pairs of positive weight are reported.
///
/// Weights are nonnegative, so a maximum-weight matching can be found as a
/// maximum-weight perfect matching after padding to a square matrix with
/// zero-weight cells. Runs in O(s^3) for s vertices with incident positive
/// weight.
pub fn max_weight_bipartite_matching(b: &WeightedBipartite) -> (u64, Vec<(usize, usize)>) {
    // Restrict to vertices touching a positive-weight pair; everything else
    // can only be matched at weight zero.
    let mut lefts: Vec<usize> = b.weight.keys().map(|&(l, _)| l).collect();
    lefts.sort_unstable();
    lefts.dedup();
    let mut rights: Vec<usize> = b.weight.keys().map(|&(_, r)| r).collect();
    rights.sort_unstable();
    rights.dedup();
    if lefts.is_empty() {
        return (0, Vec::new());
    }
    let size = lefts.len().max(rights.len());
    let mut cost = vec![vec![0i64; size]; size];
    for (&(l, r), &w) in &b.weight {
        let li = lefts.binary_search(&l).unwrap();
        let ri = rights.binary_search(&r).unwrap();
        cost[li][ri] = -(w as i64);
    }
    let assignment = min_cost_assignment(&cost);
    let mut total = 0u64;
    let mut matching = Vec::new();
    for (li, &ri) in assignment.iter().enumerate() {
        if li < lefts.len() && ri < rights.len() {
            let w = b.weight(lefts[li], rights[ri]);
            if w > 0 {
                total += w;
                matching.push((lefts[li], rights[ri]));
            }
        }
    }
    matching.sort_unstable();
    (total, matching)
}

/// Minimum-cost assignment on a square matrix; returns the column assigned
/// to each row. Classic O(n^3) Hungarian algorithm with potentials.
fn min_cost_assignment(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    const INF: i64 = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1]; // row matched to column j (1-based, 0 = free)
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![usize::MAX; n];
    for j in 1..=n {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_matrix(w: &[&[u64]]) -> WeightedBipartite {
        let mut b = WeightedBipartite::new(w.len(), w.first().map_or(0, |r| r.len()));
        for (i, row) in w.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                b.set_weight(i, j, x);
            }
        }
        b
    }

    /// Brute force over all injective left -> right maps.
    fn brute_force(b: &WeightedBipartite) -> u64 {
        fn go(b: &WeightedBipartite, l: usize, used: &mut Vec<bool>) -> u64 {
            if l == b.left_count() {
                return 0;
            }
            let mut best = go(b, l + 1, used); // leave l unmatched
            for r in 0..b.right_count() {
                if !used[r] {
                    used[r] = true;
                    best = best.max(b.weight(l, r) + go(b, l + 1, used));
                    used[r] = false;
                }
            }
            best
        }
        go(b, 0, &mut vec![false; b.right_count()])
    }

    #[test]
    fn worked_example_matching() {
        // Overlap weights of the 3x2 example pair: rows are the clusters
        // {0..=5}, {6,7}, {8}; columns {0,1,2,6,7}, {3,4,5,8}.
        let b = from_matrix(&[&[3, 3], &[2, 0], &[0, 1]]);
        let (w, matching) = max_weight_bipartite_matching(&b);
        assert_eq!(w, 5);
        assert_eq!(matching, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn all_zero_weights() {
        let b = from_matrix(&[&[0, 0], &[0, 0]]);
        let (w, matching) = max_weight_bipartite_matching(&b);
        assert_eq!(w, 0);
        assert!(matching.is_empty());
    }

    #[test]
    fn two_by_two() {
        let b = from_matrix(&[&[2, 3], &[3, 2]]);
        let (w, _) = max_weight_bipartite_matching(&b);
        assert_eq!(w, brute_force(&b));
        assert_eq!(w, 6);
    }

    #[test]
    fn matches_brute_force_on_small_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let l = rng.gen_range(0..=5);
            let r = rng.gen_range(0..=5);
            let mut b = WeightedBipartite::new(l, r);
            for i in 0..l {
                for j in 0..r {
                    b.set_weight(i, j, rng.gen_range(0..8));
                }
            }
            let (w, matching) = max_weight_bipartite_matching(&b);
            assert_eq!(w, brute_force(&b));
            // The reported matching attains the weight and is a matching.
            let mut seen_l = std::collections::BTreeSet::new();
            let mut seen_r = std::collections::BTreeSet::new();
            let mut total = 0;
            for (i, j) in matching {
                assert!(seen_l.insert(i) && seen_r.insert(j));
                total += b.weight(i, j);
            }
            assert_eq!(total, w);
        }
    }
}
