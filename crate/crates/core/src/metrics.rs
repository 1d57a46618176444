//! Evaluation-side measures: optimal-permutation SI-SDR, the AUC-SDR
//! consistency score, and the MCL collapse rate.

use crate::assignment::{hungarian, Permutation};
use crate::error::{Error, Result};
use crate::losses::{LossMethod, LossReport};
use crate::sdr::{check_shapes, cost_matrix};
use crate::signal::SourceSet;

/// Matched pair scores in dB, sorted in decreasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct PairScores {
    scores: Vec<f64>,
}

impl PairScores {
    /// Sorts the given scores into decreasing order.
    pub fn new(mut scores: Vec<f64>) -> Self {
        scores.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Self { scores }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn best(&self) -> f64 {
        self.scores[0]
    }

    pub fn worst(&self) -> f64 {
        *self.scores.last().unwrap()
    }
}

/// AUC-SDR: the mean of pair scores normalized between the best score and
/// the floor `min(0, worst)`.
#[derive(Clone, Debug)]
pub struct AucSdrReport {
    /// Consistency score in [0, 1].
    pub auc: f64,
    /// Normalization floor in dB.
    pub floor: f64,
    pub scores: PairScores,
}

/// Hungarian-optimal matching on the negated SI-SDR cost matrix, with the
/// per-pair scores it induces. This is the same matching PIT trains against.
pub fn matched_pair_scores(
    targets: &SourceSet,
    predictions: &SourceSet,
) -> Result<(Permutation, Vec<f64>)> {
    check_shapes(targets, predictions)?;
    let costs = cost_matrix(targets, predictions)?;
    let assignment = hungarian(&costs);
    let scores = assignment
        .permutation
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &j)| -costs.get(i, j))
        .collect();
    Ok((assignment.permutation, scores))
}

/// Mean SI-SDR in dB over the optimally matched pairs; the headline metric.
pub fn optimal_perm_si_sdr(targets: &SourceSet, predictions: &SourceSet) -> Result<f64> {
    let (_, scores) = matched_pair_scores(targets, predictions)?;
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// AUC-SDR of the optimally matched pairs.
pub fn auc_sdr(targets: &SourceSet, predictions: &SourceSet) -> Result<AucSdrReport> {
    let (_, scores) = matched_pair_scores(targets, predictions)?;
    Ok(auc_from_scores(&scores))
}

/// The normalization itself, separated so score vectors can be evaluated
/// directly. Scores are sorted in decreasing order `s_1 >= ... >= s_n`, the
/// floor is `m = min(0, s_n)`, and each score maps to `(s_i - m)/(s_1 - m)`.
/// When every score ties at a non-positive value the mapping degenerates and
/// the result is defined as 0.
pub fn auc_from_scores(scores: &[f64]) -> AucSdrReport {
    let scores = PairScores::new(scores.to_vec());
    let floor = scores.worst().min(0.0);
    let span = scores.best() - floor;
    let auc = if span <= 0.0 {
        0.0
    } else {
        scores.scores().iter().map(|s| (s - floor) / span).sum::<f64>() / scores.scores().len() as f64
    };
    AucSdrReport { auc, floor, scores }
}

/// Fraction of predictions never selected as a winner. Only meaningful for
/// MCL reports; other methods always use every prediction exactly once.
pub fn collapse_rate(report: &LossReport) -> Result<f64> {
    if report.method != LossMethod::Mcl {
        return Err(Error::MethodMismatch {
            got: report.method.name(),
        });
    }
    let unused = report.usage.iter().filter(|&&u| u == 0).count();
    Ok(unused as f64 / report.usage.len() as f64)
}
