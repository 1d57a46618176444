//! Scale-invariant SDR: the pairwise reconstruction metric, its analytic
//! gradient, and pairwise cost matrices.
//!
//! The metric is `10*log10(<y,e>^2 / (|y|^2 |e|^2 - <y,e>^2))` with numerator
//! and denominator each stabilized by an additive `TAU` before the ratio,
//! then clamped to `[-CAP_DB, CAP_DB]`. The stabilizer is applied after
//! normalizing the estimate to unit energy (dividing both terms by `|e|^2`,
//! which leaves the unstabilized ratio untouched), so the value is invariant
//! to rescaling the estimate at any magnitude. The loss convention used
//! everywhere else in the crate is the negated value, so that minimization
//! improves reconstruction.

use crate::error::{Error, Result};
use crate::signal::{Signal, SourceSet};

/// Symmetric clamp for the metric, in dB.
pub const CAP_DB: f64 = 30.0;

/// Additive stabilizer applied to numerator and denominator.
pub const TAU: f64 = 1e-8;

const DB_SCALE: f64 = 10.0 / std::f64::consts::LN_10;

/// A clamped SI-SDR value in decibels.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SdrValue(f64);

impl SdrValue {
    pub fn db(self) -> f64 {
        self.0
    }
}

/// Dot product and squared norms shared by the metric and its gradient.
fn inner_terms(reference: &Signal, estimate: &Signal) -> Result<(f64, f64, f64)> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch {
            left: reference.len(),
            right: estimate.len(),
        });
    }
    let mut dot = 0.0;
    let mut ref_energy = 0.0;
    let mut est_energy = 0.0;
    for (&y, &e) in reference.samples().iter().zip(estimate.samples()) {
        dot += y * e;
        ref_energy += y * y;
        est_energy += e * e;
    }
    if ref_energy == 0.0 {
        return Err(Error::ZeroNormReference);
    }
    Ok((dot, ref_energy, est_energy))
}

/// Stabilized ratio terms, computed on the unit-normalized estimate: the
/// aligned energy is `<y,e>^2 / |e|^2`, so a rescaled estimate changes the
/// inputs only by rounding and the additive `TAU` keeps its meaning at
/// every scale.
fn ratio_terms(dot: f64, ref_energy: f64, est_energy: f64) -> (f64, f64) {
    let aligned = dot * dot / est_energy;
    let num = aligned + TAU;
    // Rounding can push the Cauchy-Schwarz residual slightly negative for
    // collinear pairs; floor it so the ratio stays positive.
    let den = (ref_energy - aligned).max(0.0) + TAU;
    (num, den)
}

/// Scale-invariant SDR of `estimate` against `reference`, in dB.
///
/// A zero-norm estimate scores `-CAP_DB`; a zero-norm reference is rejected
/// because the metric is undefined there.
pub fn si_sdr(reference: &Signal, estimate: &Signal) -> Result<SdrValue> {
    let (dot, ref_energy, est_energy) = inner_terms(reference, estimate)?;
    if est_energy == 0.0 {
        return Ok(SdrValue(-CAP_DB));
    }
    let (num, den) = ratio_terms(dot, ref_energy, est_energy);
    Ok(SdrValue((10.0 * (num / den).log10()).clamp(-CAP_DB, CAP_DB)))
}

/// The loss form of the metric: `-si_sdr`. Lower is better.
pub fn neg_si_sdr(reference: &Signal, estimate: &Signal) -> Result<f64> {
    Ok(-si_sdr(reference, estimate)?.db())
}

/// Gradient of `neg_si_sdr` with respect to the estimate.
///
/// Where the value is clamped at `+CAP_DB` (near-perfect reconstruction) the
/// gradient is the zero vector; elsewhere it is the closed-form derivative of
/// the stabilized ratio. A zero-norm estimate also yields the zero vector,
/// which is what the formula itself produces there.
pub fn neg_si_sdr_grad(reference: &Signal, estimate: &Signal) -> Result<Signal> {
    let (dot, ref_energy, est_energy) = inner_terms(reference, estimate)?;
    let len = reference.len();
    if est_energy == 0.0 {
        return Ok(Signal::from_raw(vec![0.0; len]));
    }
    let (num, den) = ratio_terms(dot, ref_energy, est_energy);
    let unclamped_db = 10.0 * (num / den).log10();
    if unclamped_db >= CAP_DB {
        return Ok(Signal::from_raw(vec![0.0; len]));
    }
    // With a = <y,e>^2/|e|^2, the loss is -K (ln(a + tau) - ln(p - a + tau))
    // and d(-loss)/de_t = -K (1/N + 1/D) da/de_t, where
    // da/de_t = 2 dot y_t / q - 2 a e_t / q. The gradient is exactly
    // orthogonal to the estimate, as scale invariance demands.
    let aligned = dot * dot / est_energy;
    let factor = -DB_SCALE * (1.0 / num + 1.0 / den) * 2.0 / est_energy;
    let grad = reference
        .samples()
        .iter()
        .zip(estimate.samples())
        .map(|(&y, &e)| factor * (dot * y - aligned * e))
        .collect();
    Ok(Signal::from_raw(grad))
}

/// An `n x n` matrix of pairwise losses. Row `i` is a target, column `j` a
/// prediction; every entry is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptySourceSet);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedMatrix {
                    row: i,
                    cols: row.len(),
                    expected: n,
                });
            }
            for (j, &value) in row.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFiniteCost { row: i, col: j });
                }
                entries.push(value);
            }
        }
        Ok(Self { n, entries })
    }

    pub(crate) fn from_raw(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry-wise negation, used to turn a max-mass problem into a min-cost one.
    pub fn negated(&self) -> CostMatrix {
        CostMatrix {
            n: self.n,
            entries: self.entries.iter().map(|c| -c).collect(),
        }
    }
}

/// Pairwise loss matrix `C[i][j] = neg_si_sdr(targets[i], predictions[j])`.
pub fn cost_matrix(targets: &SourceSet, predictions: &SourceSet) -> Result<CostMatrix> {
    check_shapes(targets, predictions)?;
    let n = targets.n();
    let mut entries = Vec::with_capacity(n * n);
    for target in targets.signals() {
        for prediction in predictions.signals() {
            entries.push(neg_si_sdr(target, prediction)?);
        }
    }
    Ok(CostMatrix::from_raw(n, entries))
}

/// Shared shape precondition for every pairwise operation.
pub(crate) fn check_shapes(targets: &SourceSet, predictions: &SourceSet) -> Result<()> {
    if targets.n() != predictions.n() {
        return Err(Error::SourceCountMismatch {
            targets: targets.n(),
            predictions: predictions.n(),
        });
    }
    if targets.frames() != predictions.frames() {
        return Err(Error::LengthMismatch {
            left: targets.frames(),
            right: predictions.frames(),
        });
    }
    Ok(())
}
