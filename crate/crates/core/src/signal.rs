//! Waveform containers: single signals, sets of equal-length sources, and
//! their instantaneous mixture.

use crate::error::{Error, Result};

/// A mono waveform of 64-bit samples. Always non-empty with finite samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
}

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { samples })
    }

    /// Construct without validation. Callers must uphold the invariants.
    pub(crate) fn from_raw(samples: Vec<f64>) -> Self {
        debug_assert!(!samples.is_empty());
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum()
    }

    pub fn rms(&self) -> f64 {
        (self.energy() / self.len() as f64).sqrt()
    }

    /// Returns a copy with the sample mean removed.
    pub fn zero_mean(&self) -> Signal {
        let mean = self.samples.iter().sum::<f64>() / self.len() as f64;
        Signal::from_raw(self.samples.iter().map(|s| s - mean).collect())
    }

    /// Returns a copy truncated to the first `len` samples.
    pub fn truncated(&self, len: usize) -> Result<Signal> {
        if len == 0 || len > self.len() {
            return Err(Error::InvalidArgument("truncation length out of range"));
        }
        Ok(Signal::from_raw(self.samples[..len].to_vec()))
    }
}

/// `n` signals of identical length: either ground-truth targets or model
/// predictions.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceSet {
    signals: Vec<Signal>,
}

impl SourceSet {
    pub fn new(signals: Vec<Signal>) -> Result<Self> {
        let first_len = signals.first().ok_or(Error::EmptySourceSet)?.len();
        for signal in &signals {
            if signal.len() != first_len {
                return Err(Error::LengthMismatch {
                    left: first_len,
                    right: signal.len(),
                });
            }
        }
        Ok(Self { signals })
    }

    pub(crate) fn from_raw(signals: Vec<Signal>) -> Self {
        debug_assert!(!signals.is_empty());
        debug_assert!(signals.iter().all(|s| s.len() == signals[0].len()));
        Self { signals }
    }

    /// Number of sources.
    pub fn n(&self) -> usize {
        self.signals.len()
    }

    /// Common signal length in frames.
    pub fn frames(&self) -> usize {
        self.signals[0].len()
    }

    pub fn signals(&self) -> &[Signal] {
        &self.signals
    }

    pub fn get(&self, i: usize) -> &Signal {
        &self.signals[i]
    }

    /// Root-mean-square over all sources, used to scale initializations.
    pub fn rms(&self) -> f64 {
        let total: f64 = self.signals.iter().map(Signal::energy).sum();
        (total / (self.n() * self.frames()) as f64).sqrt()
    }
}

impl std::ops::Index<usize> for SourceSet {
    type Output = Signal;

    fn index(&self, i: usize) -> &Signal {
        &self.signals[i]
    }
}

/// The single-channel mixture a separator would observe.
#[derive(Clone, Debug, PartialEq)]
pub struct Mixture {
    signal: Signal,
}

impl Mixture {
    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn samples(&self) -> &[f64] {
        self.signal.samples()
    }
}

/// Instantaneous mixing: the sample-wise sum of all sources, no gain applied.
/// Sources accumulate in index order so the result does not depend on any
/// internal scheduling.
pub fn mix(sources: &SourceSet) -> Mixture {
    let mut acc = vec![0.0; sources.frames()];
    for signal in sources.signals() {
        for (a, s) in acc.iter_mut().zip(signal.samples()) {
            *a += s;
        }
    }
    Mixture {
        signal: Signal::from_raw(acc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_rejects_empty_and_non_finite() {
        assert!(matches!(Signal::new(vec![]), Err(Error::EmptySignal)));
        assert!(matches!(
            Signal::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteSample { index: 1 })
        ));
        assert!(matches!(
            Signal::new(vec![f64::INFINITY]),
            Err(Error::NonFiniteSample { index: 0 })
        ));
    }

    #[test]
    fn source_set_requires_equal_lengths() {
        let a = Signal::new(vec![1.0, 2.0]).unwrap();
        let b = Signal::new(vec![1.0]).unwrap();
        assert!(matches!(
            SourceSet::new(vec![a, b]),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        ));
        assert!(matches!(SourceSet::new(vec![]), Err(Error::EmptySourceSet)));
    }

    #[test]
    fn mix_single_source_is_identity() {
        let s = Signal::new(vec![0.5, -0.25, 1.0]).unwrap();
        let set = SourceSet::new(vec![s.clone()]).unwrap();
        assert_eq!(mix(&set).samples(), s.samples());
    }

    #[test]
    fn mix_antiphase_cancels() {
        let a = Signal::new(vec![1.0, -2.0, 3.0]).unwrap();
        let b = Signal::new(vec![-1.0, 2.0, -3.0]).unwrap();
        let set = SourceSet::new(vec![a, b]).unwrap();
        assert!(mix(&set).samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn mix_of_orthogonal_sinusoids_adds_energy() {
        let l = 256;
        let make = |cycles: f64| {
            Signal::new(
                (0..l)
                    .map(|t| (std::f64::consts::TAU * cycles * t as f64 / l as f64).sin())
                    .collect(),
            )
            .unwrap()
        };
        let a = make(5.0);
        let b = make(9.0);
        let sum_energy = a.energy() + b.energy();
        let set = SourceSet::new(vec![a, b]).unwrap();
        let mixed = Signal::new(mix(&set).samples().to_vec()).unwrap();
        assert!((mixed.energy() - sum_energy).abs() < 1e-9);
    }

    #[test]
    fn zero_mean_removes_offset() {
        let s = Signal::new(vec![1.0, 2.0, 3.0]).unwrap();
        let centered = s.zero_mean();
        let mean: f64 = centered.samples().iter().sum::<f64>() / 3.0;
        assert!(mean.abs() < 1e-15);
    }
}
