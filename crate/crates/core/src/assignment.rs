//! Solvers for the prediction-target matching problem: exhaustive search
//! over permutations, an O(n^3) shortest-augmenting-path Hungarian solver,
//! and entropy-regularized Sinkhorn iteration over doubly stochastic plans.

mod sinkhorn;

pub use sinkhorn::{
    plan_entropy, plan_to_permutation, sinkhorn, TransportPlan, DEFAULT_EPSILON,
    DEFAULT_MAX_ITERS, DEFAULT_TOL_MARGINAL,
};

use crate::error::{Error, Result};
use crate::sdr::CostMatrix;

/// Largest size accepted by the factorial search.
pub const EXHAUSTIVE_MAX_N: usize = 10;

/// A bijective assignment: `map[i]` is the prediction index matched to
/// target `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n || seen[j] {
                return Err(Error::InvalidArgument("mapping is not a permutation"));
            }
            seen[j] = true;
        }
        Ok(Self { map })
    }

    pub(crate) fn from_raw(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Prediction index assigned to target `i`.
    pub fn get(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// Sum of matched entries, accumulated in target order.
    pub fn cost_on(&self, costs: &CostMatrix) -> f64 {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| costs.get(i, j))
            .sum()
    }
}

/// A matching together with its total cost over the matched entries.
#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentResult {
    pub permutation: Permutation,
    pub total_cost: f64,
}

/// Advances `perm` to its lexicographic successor, returning false once the
/// sequence has wrapped back to sorted order.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Global minimizer over all `n!` permutations. Ties break to the
/// lexicographically smallest mapping; guarded against factorial blow-up.
pub fn exhaustive_best_permutation(costs: &CostMatrix) -> Result<AssignmentResult> {
    let n = costs.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::TooManySources {
            n,
            limit: EXHAUSTIVE_MAX_N,
        });
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut best = current.clone();
    let mut best_cost = f64::INFINITY;
    loop {
        let cost: f64 = current
            .iter()
            .enumerate()
            .map(|(i, &j)| costs.get(i, j))
            .sum();
        // Strict improvement keeps the first (lexicographically smallest) optimum.
        if cost < best_cost {
            best_cost = cost;
            best.copy_from_slice(&current);
        }
        if !next_permutation(&mut current) {
            break;
        }
    }
    Ok(AssignmentResult {
        permutation: Permutation::from_raw(best),
        total_cost: best_cost,
    })
}

/// Minimum-cost perfect matching by shortest augmenting paths with dual
/// potentials, worst case O(n^3). Column scans use strict comparisons so
/// equal-cost alternatives resolve toward lower indices.
pub fn hungarian(costs: &CostMatrix) -> AssignmentResult {
    let n = costs.n();
    // 1-based internals; index 0 is the virtual unassigned slot.
    let mut row_potential = vec![0.0f64; n + 1];
    let mut col_potential = vec![0.0f64; n + 1];
    let mut col_to_row = vec![0usize; n + 1];
    let mut path = vec![0usize; n + 1];

    for row in 1..=n {
        col_to_row[0] = row;
        let mut current_col = 0usize;
        let mut min_reduced = vec![f64::INFINITY; n + 1];
        let mut visited = vec![false; n + 1];

        loop {
            visited[current_col] = true;
            let active_row = col_to_row[current_col];
            let mut delta = f64::INFINITY;
            let mut next_col = 0usize;

            for col in 1..=n {
                if visited[col] {
                    continue;
                }
                let reduced = costs.get(active_row - 1, col - 1)
                    - row_potential[active_row]
                    - col_potential[col];
                if reduced < min_reduced[col] {
                    min_reduced[col] = reduced;
                    path[col] = current_col;
                }
                if min_reduced[col] < delta {
                    delta = min_reduced[col];
                    next_col = col;
                }
            }

            for col in 0..=n {
                if visited[col] {
                    row_potential[col_to_row[col]] += delta;
                    col_potential[col] -= delta;
                } else {
                    min_reduced[col] -= delta;
                }
            }

            current_col = next_col;
            if col_to_row[current_col] == 0 {
                break;
            }
        }

        // Walk the augmenting path back, flipping assignments.
        while current_col != 0 {
            let prev = path[current_col];
            col_to_row[current_col] = col_to_row[prev];
            current_col = prev;
        }
    }

    let mut map = vec![0usize; n];
    for col in 1..=n {
        if col_to_row[col] > 0 {
            map[col_to_row[col] - 1] = col - 1;
        }
    }
    let permutation = Permutation::from_raw(map);
    let total_cost = permutation.cost_on(costs);
    AssignmentResult {
        permutation,
        total_cost,
    }
}
