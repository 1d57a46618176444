//! The three permutation-resolution training objectives.
//!
//! All three reduce the same pairwise loss matrix (negated SI-SDR) but
//! resolve the target-prediction ambiguity differently: PIT searches
//! permutations (exhaustively or by the Hungarian solver), SinkPIT relaxes
//! to doubly stochastic plans with entropy regularization, and MCL lets each
//! target pick its best prediction with no exclusivity at all.
//!
//! Reported losses are per-source (divided by `n`) so the methods are
//! numerically comparable. Gradients treat the matching as locally constant:
//! the permutation or plan is held fixed while the pairwise terms are
//! differentiated.

use crate::assignment::{
    exhaustive_best_permutation, hungarian, plan_entropy, plan_to_permutation, sinkhorn,
    AssignmentResult, TransportPlan, DEFAULT_MAX_ITERS, DEFAULT_TOL_MARGINAL,
};
use crate::error::Result;
use crate::sdr::{check_shapes, cost_matrix, neg_si_sdr_grad, CostMatrix};
use crate::signal::SourceSet;

/// Which objective produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LossMethod {
    PitExhaustive,
    PitHungarian,
    SinkPit,
    Mcl,
}

impl LossMethod {
    pub fn name(self) -> &'static str {
        match self {
            LossMethod::PitExhaustive => "pit-exhaustive",
            LossMethod::PitHungarian => "pit-hungarian",
            LossMethod::SinkPit => "sinkpit",
            LossMethod::Mcl => "mcl",
        }
    }
}

impl std::fmt::Display for LossMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Permutation solver backing the PIT objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PitSolver {
    Exhaustive,
    Hungarian,
}

/// One matched (target, prediction) pair and its pairwise loss.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchedPair {
    pub target: usize,
    pub prediction: usize,
    pub pair_loss: f64,
}

/// Scalar loss plus everything the trainer and metrics need: the matching,
/// per-prediction usage counts, and the gradient with respect to the
/// predictions.
#[derive(Clone, Debug)]
pub struct LossReport {
    pub method: LossMethod,
    /// Per-source loss value.
    pub loss: f64,
    pub matched_pairs: Vec<MatchedPair>,
    /// How many targets selected each prediction. Sums to `n`; a zero entry
    /// means the prediction is currently unused (MCL collapse).
    pub usage: Vec<usize>,
    /// `d loss / d predictions`, shaped like the prediction set.
    pub gradient: Vec<Vec<f64>>,
    /// Set when the SinkPIT plan failed to reach its marginal tolerance;
    /// reported rather than fatal.
    pub solver_converged: bool,
}

/// Geometric annealing ladder for SinkPIT: round `k` runs the solver at
/// `epsilon * decay^k`, and the final round's plan defines the loss.
#[derive(Clone, Copy, Debug)]
pub struct EpsilonSchedule {
    pub decay: f64,
    pub rounds: usize,
}

/// PIT objective: per-source cost of the optimal permutation.
pub fn pit_loss(
    targets: &SourceSet,
    predictions: &SourceSet,
    solver: PitSolver,
) -> Result<LossReport> {
    check_shapes(targets, predictions)?;
    let costs = cost_matrix(targets, predictions)?;
    let assignment = pit_from_cost(&costs, solver)?;
    let n = costs.n();
    let mut matched_pairs = Vec::with_capacity(n);
    let mut gradient = zero_gradient(predictions);
    for (i, &j) in assignment.permutation.as_slice().iter().enumerate() {
        matched_pairs.push(MatchedPair {
            target: i,
            prediction: j,
            pair_loss: costs.get(i, j),
        });
        accumulate_pair_grad(&mut gradient[j], targets, predictions, i, j, 1.0 / n as f64)?;
    }
    let method = match solver {
        PitSolver::Exhaustive => LossMethod::PitExhaustive,
        PitSolver::Hungarian => LossMethod::PitHungarian,
    };
    Ok(LossReport {
        method,
        loss: assignment.total_cost / n as f64,
        matched_pairs,
        usage: vec![1; n],
        gradient,
        solver_converged: true,
    })
}

/// SinkPIT objective: per-source regularized transport cost
/// `(<pi, C> - eps H(pi)) / n` at the Sinkhorn plan.
pub fn sinkpit_loss(
    targets: &SourceSet,
    predictions: &SourceSet,
    epsilon: f64,
    schedule: Option<EpsilonSchedule>,
) -> Result<LossReport> {
    check_shapes(targets, predictions)?;
    let costs = cost_matrix(targets, predictions)?;
    let n = costs.n();
    let (plan, loss) = sinkpit_from_cost(&costs, epsilon, schedule)?;

    // The rounded permutation is for reporting only; the loss and gradient
    // use the relaxed plan itself.
    let rounded = plan_to_permutation(&plan);
    let matched_pairs = rounded
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &j)| MatchedPair {
            target: i,
            prediction: j,
            pair_loss: costs.get(i, j),
        })
        .collect();

    let mut gradient = zero_gradient(predictions);
    for i in 0..n {
        for (j, grad) in gradient.iter_mut().enumerate() {
            let mass = plan.get(i, j);
            if mass > 0.0 {
                accumulate_pair_grad(grad, targets, predictions, i, j, mass / n as f64)?;
            }
        }
    }

    Ok(LossReport {
        method: LossMethod::SinkPit,
        loss,
        matched_pairs,
        usage: vec![1; n],
        gradient,
        solver_converged: plan.converged(),
    })
}

/// MCL objective: each target is claimed by its cheapest prediction and only
/// winners receive gradient. Nothing prevents one prediction from winning
/// several targets; that is the collapse the usage counts expose.
pub fn mcl_loss(targets: &SourceSet, predictions: &SourceSet) -> Result<LossReport> {
    check_shapes(targets, predictions)?;
    let costs = cost_matrix(targets, predictions)?;
    let n = costs.n();
    let (winners, loss) = mcl_from_cost(&costs);

    let mut usage = vec![0usize; n];
    let mut matched_pairs = Vec::with_capacity(n);
    let mut gradient = zero_gradient(predictions);
    for (i, &j) in winners.iter().enumerate() {
        usage[j] += 1;
        matched_pairs.push(MatchedPair {
            target: i,
            prediction: j,
            pair_loss: costs.get(i, j),
        });
        accumulate_pair_grad(&mut gradient[j], targets, predictions, i, j, 1.0 / n as f64)?;
    }

    Ok(LossReport {
        method: LossMethod::Mcl,
        loss,
        matched_pairs,
        usage,
        gradient,
        solver_converged: true,
    })
}

/// Optimal assignment for a pre-built cost matrix.
pub fn pit_from_cost(costs: &CostMatrix, solver: PitSolver) -> Result<AssignmentResult> {
    match solver {
        PitSolver::Exhaustive => exhaustive_best_permutation(costs),
        PitSolver::Hungarian => Ok(hungarian(costs)),
    }
}

/// Iteration budget for the loss path. Sharp regularization needs more
/// rounds — potentials move by O(eps) while contested cost gaps stay fixed —
/// so the budget grows like 1/eps, mirroring the solver's O(n^2/eps) bill.
fn iteration_budget(epsilon: f64) -> usize {
    DEFAULT_MAX_ITERS.max(((8.0 / epsilon).ceil() as usize).min(200_000))
}

/// Sinkhorn plan and per-source regularized loss for a pre-built cost matrix.
pub fn sinkpit_from_cost(
    costs: &CostMatrix,
    epsilon: f64,
    schedule: Option<EpsilonSchedule>,
) -> Result<(TransportPlan, f64)> {
    let n = costs.n();
    let rounds = schedule.map(|s| s.rounds.max(1)).unwrap_or(1);
    let decay = schedule.map(|s| s.decay).unwrap_or(1.0);
    let mut eps = epsilon;
    let mut plan = sinkhorn(costs, eps, iteration_budget(eps), DEFAULT_TOL_MARGINAL)?;
    for _ in 1..rounds {
        eps *= decay;
        plan = sinkhorn(costs, eps, iteration_budget(eps), DEFAULT_TOL_MARGINAL)?;
    }
    let loss = (plan.transport_cost(costs) - eps * plan_entropy(&plan)) / n as f64;
    Ok((plan, loss))
}

/// Row-wise winners (ties to the lowest prediction index) and the per-source
/// mean of the row minima.
pub fn mcl_from_cost(costs: &CostMatrix) -> (Vec<usize>, f64) {
    let n = costs.n();
    let mut winners = Vec::with_capacity(n);
    let mut total = 0.0;
    for i in 0..n {
        let row = costs.row(i);
        let mut best = 0usize;
        for (j, &c) in row.iter().enumerate() {
            if c < row[best] {
                best = j;
            }
        }
        winners.push(best);
        total += row[best];
    }
    (winners, total / n as f64)
}

fn zero_gradient(predictions: &SourceSet) -> Vec<Vec<f64>> {
    vec![vec![0.0; predictions.frames()]; predictions.n()]
}

fn accumulate_pair_grad(
    acc: &mut [f64],
    targets: &SourceSet,
    predictions: &SourceSet,
    target: usize,
    prediction: usize,
    weight: f64,
) -> Result<()> {
    let grad = neg_si_sdr_grad(&targets[target], &predictions[prediction])?;
    for (a, g) in acc.iter_mut().zip(grad.samples()) {
        *a += weight * g;
    }
    Ok(())
}
