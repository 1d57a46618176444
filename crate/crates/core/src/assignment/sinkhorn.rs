//! Entropy-regularized transport over doubly stochastic matrices.
//!
//! Minimizes `<pi, C> - eps * H(pi)` subject to unit row and column sums.
//! Iterations run entirely in the log domain: with log-kernel
//! `K[i][j] = -C[i][j] / eps` and potentials `f`, `g`, the plan is
//! `pi = exp(K + f_i + g_j)` and each half-iteration sets one potential to
//! the negated log-sum-exp of the other. This survives eps as small as 1e-2
//! on cost ranges of +/-30 where a multiplicative implementation underflows.

use crate::assignment::{hungarian, Permutation};
use crate::error::{Error, Result};
use crate::sdr::CostMatrix;

pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_MAX_ITERS: usize = 500;
pub const DEFAULT_TOL_MARGINAL: f64 = 1e-6;

/// A non-negative plan with (approximately) unit marginals, plus the solver
/// telemetry needed to judge whether it is trustworthy.
#[derive(Clone, Debug)]
pub struct TransportPlan {
    n: usize,
    entries: Vec<f64>,
    epsilon: f64,
    iterations_used: usize,
    converged: bool,
}

impl TransportPlan {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn iterations_used(&self) -> usize {
        self.iterations_used
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].iter().sum())
            .collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for i in 0..self.n {
            for (j, s) in sums.iter_mut().enumerate() {
                *s += self.entries[i * self.n + j];
            }
        }
        sums
    }

    /// Transport cost `<pi, C>`.
    pub fn transport_cost(&self, costs: &CostMatrix) -> f64 {
        self.entries
            .iter()
            .zip(costs.entries())
            .map(|(p, c)| p * c)
            .sum()
    }

    /// Builds a plan directly from entries; intended for tests and for
    /// consumers that construct reference plans by hand.
    pub fn from_entries(n: usize, entries: Vec<f64>, epsilon: f64) -> Result<Self> {
        if entries.len() != n * n || n == 0 {
            return Err(Error::InvalidArgument("plan must be square and non-empty"));
        }
        if entries.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidArgument("plan entries must be finite and non-negative"));
        }
        Ok(Self {
            n,
            entries,
            epsilon,
            iterations_used: 0,
            converged: true,
        })
    }
}

fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + terms.map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Sinkhorn iteration on the cost matrix. Alternates row and column
/// normalizations until both marginals are within `tol_marginal` of 1 in
/// max-norm, or gives up after `max_iters` with `converged = false`.
pub fn sinkhorn(
    costs: &CostMatrix,
    epsilon: f64,
    max_iters: usize,
    tol_marginal: f64,
) -> Result<TransportPlan> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidEpsilon { epsilon });
    }
    if max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1"));
    }
    let n = costs.n();
    let kernel: Vec<f64> = costs.entries().iter().map(|c| -c / epsilon).collect();

    let mut row_potential = vec![0.0f64; n];
    let mut col_potential = vec![0.0f64; n];
    let mut plan = vec![0.0f64; n * n];
    let mut iterations_used = max_iters;
    let mut converged = false;

    for iter in 1..=max_iters {
        for i in 0..n {
            let row = &kernel[i * n..(i + 1) * n];
            row_potential[i] =
                -log_sum_exp(row.iter().zip(&col_potential).map(|(k, g)| k + g));
        }
        for j in 0..n {
            col_potential[j] = -log_sum_exp(
                (0..n).map(|i| kernel[i * n + j] + row_potential[i]),
            );
        }

        // Materialize the plan and check both marginals.
        let mut row_err = 0.0f64;
        let mut col_sums = vec![0.0f64; n];
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                let p = (kernel[i * n + j] + row_potential[i] + col_potential[j]).exp();
                plan[i * n + j] = p;
                row_sum += p;
                col_sums[j] += p;
            }
            row_err = row_err.max((row_sum - 1.0).abs());
        }
        let col_err = col_sums
            .iter()
            .fold(0.0f64, |acc, s| acc.max((s - 1.0).abs()));

        if row_err < tol_marginal && col_err < tol_marginal {
            iterations_used = iter;
            converged = true;
            break;
        }
    }

    Ok(TransportPlan {
        n,
        entries: plan,
        epsilon,
        iterations_used,
        converged,
    })
}

/// Plan entropy `-sum pi log pi`, with `0 log 0 = 0`.
pub fn plan_entropy(plan: &TransportPlan) -> f64 {
    plan.entries()
        .iter()
        .map(|&p| if p > 0.0 { -p * p.ln() } else { 0.0 })
        .sum()
}

/// Rounds a relaxed plan to the hard assignment carrying the most mass, by
/// solving the min-cost matching on the negated entries.
pub fn plan_to_permutation(plan: &TransportPlan) -> Permutation {
    let negated = CostMatrix::from_raw(plan.n, plan.entries.iter().map(|p| -p).collect());
    hungarian(&negated).permutation
}
