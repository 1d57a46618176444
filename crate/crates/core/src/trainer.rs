//! Desk-scale training: the predictions are free parameters optimized
//! directly against one of the three objectives. This isolates the
//! matching layer from any model architecture, which is all these
//! experiments need — parity between MCL and PIT here is a property of the
//! losses, not of a network.

use std::time::{Duration, Instant};

use crate::assignment::{hungarian, Permutation};
use crate::error::{Error, Result};
use crate::losses::{mcl_loss, pit_loss, sinkpit_loss, LossMethod, LossReport, PitSolver};
use crate::metrics::{auc_sdr, optimal_perm_si_sdr};
use crate::rng::SplitMix64;
use crate::sdr::{cost_matrix, CAP_DB};
use crate::signal::{Signal, SourceSet};

/// Update rule for the free parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimizerKind {
    /// Plain gradient descent; useful for gradient-check experiments.
    GradientDescent,
    /// Adam with the standard decay constants (0.9, 0.999).
    AdaptiveMoment,
}

/// Everything a training run depends on. Identical configs on identical
/// targets reproduce identical trajectories.
#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub loss_kind: LossMethod,
    pub steps: usize,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    /// Initialization scale relative to the target RMS.
    pub init_scale: f64,
    pub seed: u64,
    /// Regularization strength; SinkPIT only.
    pub epsilon: f64,
    pub log_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            loss_kind: LossMethod::PitHungarian,
            steps: 2000,
            learning_rate: 0.02,
            optimizer: OptimizerKind::AdaptiveMoment,
            init_scale: 0.1,
            seed: 0,
            epsilon: 0.05,
            log_every: 50,
        }
    }
}

/// One logged point along a run.
#[derive(Clone, Copy, Debug)]
pub struct TrainRecord {
    pub step: usize,
    pub loss: f64,
    pub opt_perm_si_sdr: f64,
    pub auc_sdr: f64,
    pub collapse_rate: f64,
}

/// Result of a full run.
#[derive(Clone, Debug)]
pub struct TrainTrajectory {
    pub records: Vec<TrainRecord>,
    pub final_predictions: SourceSet,
    /// Hungarian-optimal matching of the final predictions.
    pub final_permutation: Permutation,
    /// True when an MCL run still had unused predictions at the end.
    pub collapse_persisted: bool,
}

impl TrainTrajectory {
    pub fn initial_loss(&self) -> f64 {
        self.records.first().map(|r| r.loss).unwrap_or(f64::NAN)
    }

    pub fn final_loss(&self) -> f64 {
        self.records.last().map(|r| r.loss).unwrap_or(f64::NAN)
    }

    pub fn final_si_sdr(&self) -> f64 {
        self.records
            .last()
            .map(|r| r.opt_perm_si_sdr)
            .unwrap_or(f64::NAN)
    }

    pub fn final_auc(&self) -> f64 {
        self.records.last().map(|r| r.auc_sdr).unwrap_or(f64::NAN)
    }

    pub fn final_collapse_rate(&self) -> f64 {
        self.records
            .last()
            .map(|r| r.collapse_rate)
            .unwrap_or(f64::NAN)
    }
}

struct Adam {
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
    step: usize,
}

impl Adam {
    const BETA1: f64 = 0.9;
    const BETA2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(n: usize, l: usize) -> Self {
        Self {
            first: vec![vec![0.0; l]; n],
            second: vec![vec![0.0; l]; n],
            step: 0,
        }
    }

    fn update(&mut self, params: &mut [Vec<f64>], grad: &[Vec<f64>], lr: f64) {
        self.step += 1;
        let bias1 = 1.0 - Self::BETA1.powi(self.step as i32);
        let bias2 = 1.0 - Self::BETA2.powi(self.step as i32);
        for i in 0..params.len() {
            for t in 0..params[i].len() {
                let g = grad[i][t];
                let m = &mut self.first[i][t];
                *m = Self::BETA1 * *m + (1.0 - Self::BETA1) * g;
                let v = &mut self.second[i][t];
                *v = Self::BETA2 * *v + (1.0 - Self::BETA2) * g * g;
                let m_hat = *m / bias1;
                let v_hat = *v / bias2;
                params[i][t] -= lr * m_hat / (v_hat.sqrt() + Self::EPS);
            }
        }
    }
}

fn validate_config(config: &TrainConfig) -> Result<()> {
    if config.steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1"));
    }
    if config.learning_rate.is_nan() || config.learning_rate <= 0.0 {
        return Err(Error::InvalidArgument("learning rate must be positive"));
    }
    if config.log_every == 0 {
        return Err(Error::InvalidArgument("log_every must be at least 1"));
    }
    if config.loss_kind == LossMethod::SinkPit && (config.epsilon.is_nan() || config.epsilon <= 0.0) {
        return Err(Error::InvalidEpsilon {
            epsilon: config.epsilon,
        });
    }
    if !config.init_scale.is_finite() || config.init_scale < 0.0 {
        return Err(Error::InvalidArgument("init_scale must be non-negative"));
    }
    Ok(())
}

fn evaluate_loss(
    targets: &SourceSet,
    predictions: &SourceSet,
    config: &TrainConfig,
) -> Result<LossReport> {
    match config.loss_kind {
        LossMethod::PitExhaustive => pit_loss(targets, predictions, PitSolver::Exhaustive),
        LossMethod::PitHungarian => pit_loss(targets, predictions, PitSolver::Hungarian),
        LossMethod::SinkPit => sinkpit_loss(targets, predictions, config.epsilon, None),
        LossMethod::Mcl => mcl_loss(targets, predictions),
    }
}

fn record_point(
    step: usize,
    report: &LossReport,
    targets: &SourceSet,
    predictions: &SourceSet,
) -> Result<TrainRecord> {
    let unused = report.usage.iter().filter(|&&u| u == 0).count();
    Ok(TrainRecord {
        step,
        loss: report.loss,
        opt_perm_si_sdr: optimal_perm_si_sdr(targets, predictions)?,
        auc_sdr: auc_sdr(targets, predictions)?.auc,
        collapse_rate: unused as f64 / report.usage.len() as f64,
    })
}

/// Splits the mixture into `n` spectral slices, assigning frequency bins to
/// slices round-robin by descending magnitude so that the strongest
/// components land on different slices. Plain O(l^2) correlation transform;
/// runs once per training call.
fn spectral_slices(mixture: &[f64], n: usize) -> Vec<Vec<f64>> {
    let l = mixture.len();
    let half = l / 2;
    let mut coeffs = Vec::with_capacity(half);
    for k in 1..=half {
        let mut a = 0.0;
        let mut b = 0.0;
        for (t, &x) in mixture.iter().enumerate() {
            let phase = std::f64::consts::TAU * k as f64 * t as f64 / l as f64;
            a += x * phase.cos();
            b += x * phase.sin();
        }
        coeffs.push((k, a, b));
    }
    let mut order: Vec<usize> = (0..coeffs.len()).collect();
    order.sort_by(|&i, &j| {
        let mi = coeffs[i].1 * coeffs[i].1 + coeffs[i].2 * coeffs[i].2;
        let mj = coeffs[j].1 * coeffs[j].1 + coeffs[j].2 * coeffs[j].2;
        mj.partial_cmp(&mi).unwrap().then(i.cmp(&j))
    });
    let mut slices = vec![vec![0.0; l]; n];
    for (rank, &idx) in order.iter().enumerate() {
        let (k, a, b) = coeffs[idx];
        let slice = &mut slices[rank % n];
        let norm = if k == half && l.is_multiple_of(2) { 1.0 } else { 2.0 } / l as f64;
        for (t, s) in slice.iter_mut().enumerate() {
            let phase = std::f64::consts::TAU * k as f64 * t as f64 / l as f64;
            *s += norm * (a * phase.cos() + b * phase.sin());
        }
    }
    slices
}

/// Optimizes free predictions against the configured loss.
///
/// Prediction `j` starts at `init_scale * (slice_j + target_rms * noise)`,
/// where the slices are a spectral partition of the mixture. Seeding the
/// hypotheses apart is the winner-takes-all analogue of k-means++: with
/// exchangeable initializations two targets often elect the same winner,
/// and under the scale-invariant loss that shared compromise beats every
/// untrained competitor forever. The slices plant the diversity; the noise
/// term breaks any remaining ties; `init_scale = 0` still collapses
/// everything to the origin for symmetric-start experiments. Each step
/// evaluates the loss, checks for divergence, and applies the optimizer
/// update. Metrics are logged at step 0, every `log_every` steps, and after
/// the final update.
pub fn train_direct(targets: &SourceSet, config: &TrainConfig) -> Result<TrainTrajectory> {
    validate_config(config)?;
    let n = targets.n();
    let l = targets.frames();
    let noise_scale = targets.rms();
    let mixture = crate::signal::mix(targets);
    let slices = spectral_slices(mixture.samples(), n);
    let mut rng = SplitMix64::stream(config.seed, 0x7EA1);
    let mut params: Vec<Vec<f64>> = slices
        .into_iter()
        .map(|slice| {
            slice
                .into_iter()
                .map(|s| config.init_scale * (s + noise_scale * rng.next_normal()))
                .collect()
        })
        .collect();

    let mut adam = Adam::new(n, l);
    let mut records = Vec::new();

    for step in 0..config.steps {
        let predictions = params_to_set(&params, step)?;
        let report = evaluate_loss(targets, &predictions, config)?;
        if !report.loss.is_finite() || report.loss.abs() > 10.0 * CAP_DB {
            return Err(Error::Divergence {
                step,
                loss: report.loss,
            });
        }
        if step % config.log_every == 0 {
            records.push(record_point(step, &report, targets, &predictions)?);
        }
        match config.optimizer {
            OptimizerKind::GradientDescent => {
                for (row, grad) in params.iter_mut().zip(&report.gradient) {
                    for (p, g) in row.iter_mut().zip(grad) {
                        *p -= config.learning_rate * g;
                    }
                }
            }
            OptimizerKind::AdaptiveMoment => {
                adam.update(&mut params, &report.gradient, config.learning_rate)
            }
        }
    }

    let final_predictions = params_to_set(&params, config.steps)?;
    let final_report = evaluate_loss(targets, &final_predictions, config)?;
    if !final_report.loss.is_finite() || final_report.loss.abs() > 10.0 * CAP_DB {
        return Err(Error::Divergence {
            step: config.steps,
            loss: final_report.loss,
        });
    }
    records.push(record_point(
        config.steps,
        &final_report,
        targets,
        &final_predictions,
    )?);

    let final_permutation = hungarian(&cost_matrix(targets, &final_predictions)?).permutation;
    let collapse_persisted = config.loss_kind == LossMethod::Mcl
        && final_report.usage.contains(&0);

    Ok(TrainTrajectory {
        records,
        final_predictions,
        final_permutation,
        collapse_persisted,
    })
}

/// Non-finite parameters or an energy overflow mean an update blew up;
/// surface that as a divergence instead of letting the clamped metric hide
/// it behind a saturated loss value.
fn params_to_set(params: &[Vec<f64>], step: usize) -> Result<SourceSet> {
    for row in params {
        let mut energy = 0.0;
        for p in row {
            energy += p * p;
        }
        if !energy.is_finite() {
            return Err(Error::Divergence {
                step,
                loss: f64::NAN,
            });
        }
    }
    Ok(SourceSet::from_raw(
        params.iter().map(|row| Signal::from_raw(row.clone())).collect(),
    ))
}

/// Outcome of one method inside a comparison.
#[derive(Clone, Debug)]
pub struct ComparisonRow {
    pub method: LossMethod,
    pub final_loss: f64,
    pub opt_perm_si_sdr: f64,
    pub auc_sdr: f64,
    pub collapse_rate: f64,
    pub wall_time: Duration,
}

/// Runs PIT (Hungarian), SinkPIT and MCL from the same seed and reports
/// their final metrics and wall-clock time. Methods run sequentially so the
/// timings are not polluted by each other.
pub fn compare_methods(targets: &SourceSet, base: &TrainConfig) -> Result<Vec<ComparisonRow>> {
    let methods = [
        LossMethod::PitHungarian,
        LossMethod::SinkPit,
        LossMethod::Mcl,
    ];
    let mut rows = Vec::with_capacity(methods.len());
    for method in methods {
        let config = TrainConfig {
            loss_kind: method,
            ..base.clone()
        };
        let start = Instant::now();
        let trajectory = train_direct(targets, &config)?;
        let wall_time = start.elapsed();
        rows.push(ComparisonRow {
            method,
            final_loss: trajectory.final_loss(),
            opt_perm_si_sdr: trajectory.final_si_sdr(),
            auc_sdr: trajectory.final_auc(),
            collapse_rate: trajectory.final_collapse_rate(),
            wall_time,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{gen_sources, SourceKind, SynthSpec};

    fn sinusoid_targets(n: usize, l: usize, seed: u64) -> SourceSet {
        gen_sources(&SynthSpec::new(n, l, SourceKind::Sinusoid, seed)).unwrap()
    }

    #[test]
    fn single_target_fits_to_the_cap() {
        let targets = sinusoid_targets(1, 1024, 3);
        for loss_kind in [LossMethod::PitHungarian, LossMethod::Mcl, LossMethod::SinkPit] {
            let config = TrainConfig {
                loss_kind,
                steps: 500,
                ..TrainConfig::default()
            };
            let trajectory = train_direct(&targets, &config).unwrap();
            assert!(
                trajectory.final_si_sdr() >= CAP_DB,
                "{loss_kind}: {}",
                trajectory.final_si_sdr()
            );
        }
    }

    #[test]
    fn trajectories_are_deterministic() {
        let targets = sinusoid_targets(3, 256, 8);
        let config = TrainConfig {
            steps: 60,
            log_every: 10,
            ..TrainConfig::default()
        };
        let a = train_direct(&targets, &config).unwrap();
        let b = train_direct(&targets, &config).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (ra, rb) in a.records.iter().zip(&b.records) {
            assert_eq!(ra.loss, rb.loss);
            assert_eq!(ra.opt_perm_si_sdr, rb.opt_perm_si_sdr);
        }
        assert_eq!(a.final_predictions, b.final_predictions);
    }

    #[test]
    fn final_loss_improves_on_initial() {
        let targets = sinusoid_targets(2, 512, 5);
        for loss_kind in [LossMethod::PitHungarian, LossMethod::Mcl, LossMethod::SinkPit] {
            let config = TrainConfig {
                loss_kind,
                steps: 400,
                ..TrainConfig::default()
            };
            let trajectory = train_direct(&targets, &config).unwrap();
            assert!(
                trajectory.final_loss() < trajectory.initial_loss(),
                "{loss_kind}: {} !< {}",
                trajectory.final_loss(),
                trajectory.initial_loss()
            );
        }
    }

    #[test]
    fn zero_init_scale_flags_persistent_collapse() {
        let targets = sinusoid_targets(3, 256, 2);
        let config = TrainConfig {
            loss_kind: LossMethod::Mcl,
            steps: 50,
            init_scale: 0.0,
            log_every: 10,
            ..TrainConfig::default()
        };
        let trajectory = train_direct(&targets, &config).unwrap();
        let first = trajectory.records.first().unwrap();
        assert!(first.collapse_rate > 0.0);
        let decreasing_trend =
            trajectory.final_collapse_rate() < first.collapse_rate;
        assert!(
            decreasing_trend || trajectory.collapse_persisted,
            "neither recovery nor a persistent-collapse flag"
        );
    }

    #[test]
    fn mcl_winner_map_matches_pit_on_converged_runs() {
        let targets = sinusoid_targets(4, 1024, 1);
        let config = TrainConfig {
            loss_kind: LossMethod::Mcl,
            ..TrainConfig::default()
        };
        let trajectory = train_direct(&targets, &config).unwrap();
        let report = mcl_loss(&targets, &trajectory.final_predictions).unwrap();
        let mut winners: Vec<usize> = report.matched_pairs.iter().map(|p| p.prediction).collect();
        let as_perm = Permutation::new(winners.clone());
        assert!(as_perm.is_ok(), "winner map is not a permutation: {winners:?}");
        winners.sort_unstable();
        let pit = hungarian(&cost_matrix(&targets, &trajectory.final_predictions).unwrap());
        assert_eq!(as_perm.unwrap(), pit.permutation);
    }

    #[test]
    fn gradient_descent_also_trains() {
        let targets = sinusoid_targets(1, 256, 4);
        let config = TrainConfig {
            optimizer: OptimizerKind::GradientDescent,
            learning_rate: 0.5,
            steps: 2000,
            ..TrainConfig::default()
        };
        let trajectory = train_direct(&targets, &config).unwrap();
        assert!(
            trajectory.final_si_sdr() > 10.0,
            "got {}",
            trajectory.final_si_sdr()
        );
    }

    #[test]
    fn runaway_learning_rate_reports_divergence() {
        let targets = sinusoid_targets(2, 64, 0);
        let config = TrainConfig {
            optimizer: OptimizerKind::GradientDescent,
            learning_rate: 1e300,
            steps: 10,
            ..TrainConfig::default()
        };
        match train_direct(&targets, &config) {
            Err(Error::Divergence { .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let targets = sinusoid_targets(2, 64, 0);
        let bad_steps = TrainConfig {
            steps: 0,
            ..TrainConfig::default()
        };
        assert!(train_direct(&targets, &bad_steps).is_err());
        let bad_lr = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert!(train_direct(&targets, &bad_lr).is_err());
        let bad_eps = TrainConfig {
            loss_kind: LossMethod::SinkPit,
            epsilon: 0.0,
            ..TrainConfig::default()
        };
        assert!(train_direct(&targets, &bad_eps).is_err());
    }

    #[test]
    fn compare_methods_reports_all_three() {
        let targets = sinusoid_targets(2, 256, 6);
        let base = TrainConfig {
            steps: 200,
            ..TrainConfig::default()
        };
        let rows = compare_methods(&targets, &base).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].method, LossMethod::PitHungarian);
        assert_eq!(rows[1].method, LossMethod::SinkPit);
        assert_eq!(rows[2].method, LossMethod::Mcl);
        for row in &rows {
            assert!(row.wall_time > Duration::ZERO);
            assert!(row.final_loss.is_finite());
        }
    }

    #[test]
    fn methods_agree_within_one_db_on_two_speaker_scenes() {
        let targets = sinusoid_targets(2, 1024, 3);
        let rows = compare_methods(&targets, &TrainConfig::default()).unwrap();
        let best = rows.iter().map(|r| r.opt_perm_si_sdr).fold(f64::MIN, f64::max);
        let worst = rows.iter().map(|r| r.opt_perm_si_sdr).fold(f64::MAX, f64::min);
        assert!(best - worst < 1.0, "spread {best} - {worst}");
        for row in &rows {
            assert!(row.auc_sdr >= 0.9, "{}: auc {}", row.method, row.auc_sdr);
        }
    }
}
