//! Multi-choice knapsack: pick exactly one item per group so that the total
//! weight stays within the budget and the total profit reaches the target.
//! Solved by the classic pseudo-polynomial dynamic program over
//! (group prefix, weight), O(W · Σ|S_i|) time.

/// One selectable item: a nonnegative weight and a (possibly negative) profit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MckItem {
    pub weight: u64,
    pub profit: i64,
}

/// Groups of items with a weight budget `capacity` (W) and a profit target
/// `target` (P). Every group must be non-empty.
#[derive(Debug, Clone)]
pub struct MckInstance {
    pub groups: Vec<Vec<MckItem>>,
    pub capacity: u64,
    pub target: i64,
}

/// Outcome of [`solve_mck`]. `Yes` carries one chosen item index per group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MckOutcome {
    Yes(Vec<usize>),
    No,
}

const NEG_INF: i64 = i64::MIN / 2;

/// Decides the instance and reconstructs a witness selection via parent
/// pointers. Profits may be negative; unreachable DP states carry a
/// minus-infinity sentinel.
pub fn solve_mck(m: &MckInstance) -> MckOutcome {
    if m.groups.iter().any(|g| g.is_empty()) {
        return MckOutcome::No;
    }
    // Weights beyond the sum of per-group maxima can never be used.
    let useful: u64 = m
        .groups
        .iter()
        .map(|g| g.iter().map(|it| it.weight).max().unwrap_or(0))
        .sum();
    let w_cap = m.capacity.min(useful) as usize;

    let mut dp = vec![NEG_INF; w_cap + 1];
    dp[0] = 0;
    // choice[i][w]: item index of group i in the best state of weight w.
    let mut choice: Vec<Vec<u32>> = Vec::with_capacity(m.groups.len());
    for group in &m.groups {
        let mut next = vec![NEG_INF; w_cap + 1];
        let mut step = vec![u32::MAX; w_cap + 1];
        for (idx, item) in group.iter().enumerate() {
            let w = item.weight as usize;
            if w > w_cap {
                continue;
            }
            for total in w..=w_cap {
                let below = dp[total - w];
                if below == NEG_INF {
                    continue;
                }
                let profit = below + item.profit;
                if profit > next[total] {
                    next[total] = profit;
                    step[total] = idx as u32;
                }
            }
        }
        dp = next;
        choice.push(step);
    }

    let best = (0..=w_cap).max_by_key(|&w| dp[w]).unwrap_or(0);
    if dp[best] == NEG_INF || dp[best] < m.target {
        return MckOutcome::No;
    }
    // Walk the parent pointers back through the group layers.
    let mut selection = vec![0usize; m.groups.len()];
    let mut w = best;
    for i in (0..m.groups.len()).rev() {
        let idx = choice[i][w] as usize;
        selection[i] = idx;
        w -= m.groups[i][idx].weight as usize;
    }
    debug_assert_eq!(w, 0);
    debug_assert!(verify_selection(m, &selection));
    MckOutcome::Yes(selection)
}

/// Checks a selection against the instance's constraints, independently of
/// the DP table.
pub fn verify_selection(m: &MckInstance, selection: &[usize]) -> bool {
    if selection.len() != m.groups.len() {
        return false;
    }
    let mut weight = 0u64;
    let mut profit = 0i64;
    for (group, &idx) in m.groups.iter().zip(selection) {
        let Some(item) = group.get(idx) else {
            return false;
        };
        weight += item.weight;
        profit += item.profit;
    }
    weight <= m.capacity && profit >= m.target
}

/// Exhaustive enumeration of all selections; the independent oracle used by
/// the tests.
pub fn brute_force_mck(m: &MckInstance) -> bool {
    fn go(m: &MckInstance, i: usize, weight: u64, profit: i64) -> bool {
        if weight > m.capacity {
            return false;
        }
        if i == m.groups.len() {
            return profit >= m.target;
        }
        m.groups[i]
            .iter()
            .any(|it| go(m, i + 1, weight + it.weight, profit + it.profit))
    }
    go(m, 0, 0, 0)
}
