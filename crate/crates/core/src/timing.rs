//! Timing harness for the per-sample loss computation, separating the
//! shared O(n^2 l) cost-matrix work from the method-specific assignment
//! step. Timed sections run single-threaded on identical seeded workloads
//! so differences between methods are attributable to the solver alone.

use std::hint::black_box;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::losses::{mcl_from_cost, pit_from_cost, sinkpit_from_cost, LossMethod, PitSolver};
use crate::rng::SplitMix64;
use crate::sdr::{cost_matrix, CostMatrix};
use crate::signal::{Signal, SourceSet};

/// Which section of the loss computation a row measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchPhase {
    CostMatrix,
    Assignment,
    Total,
}

impl BenchPhase {
    pub fn name(self) -> &'static str {
        match self {
            BenchPhase::CostMatrix => "cost_matrix",
            BenchPhase::Assignment => "assignment",
            BenchPhase::Total => "total",
        }
    }
}

impl std::fmt::Display for BenchPhase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One timing measurement.
#[derive(Clone, Debug)]
pub struct BenchRow {
    pub n: usize,
    pub method: LossMethod,
    pub phase: BenchPhase,
    /// Mean seconds per invocation.
    pub mean_time: f64,
    /// Standard deviation over trials, seconds.
    pub std_time: f64,
    pub trials: usize,
}

/// Target duration for one timed batch; short operations are repeated until
/// a batch takes at least this long, which keeps timer resolution out of
/// the measurement.
const MIN_BATCH_SECONDS: f64 = 2e-3;

fn measure<F: FnMut()>(trials: usize, mut op: F) -> (f64, f64) {
    // Calibration pass: size the batch from a single run.
    let start = Instant::now();
    op();
    let single = start.elapsed().as_secs_f64();
    let batch = if single >= MIN_BATCH_SECONDS {
        1
    } else {
        ((MIN_BATCH_SECONDS / single.max(1e-9)).ceil() as usize).clamp(1, 1_000_000)
    };

    let mut samples = Vec::with_capacity(trials);
    for _ in 0..trials {
        let start = Instant::now();
        for _ in 0..batch {
            op();
        }
        samples.push(start.elapsed().as_secs_f64() / batch as f64);
    }
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let var = if samples.len() > 1 {
        samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64
    } else {
        0.0
    };
    (mean, var.sqrt())
}

fn solve_assignment(method: LossMethod, costs: &CostMatrix) {
    match method {
        LossMethod::PitExhaustive => {
            black_box(pit_from_cost(black_box(costs), PitSolver::Exhaustive).unwrap());
        }
        LossMethod::PitHungarian => {
            black_box(pit_from_cost(black_box(costs), PitSolver::Hungarian).unwrap());
        }
        LossMethod::SinkPit => {
            black_box(sinkpit_from_cost(black_box(costs), 0.05, None).unwrap());
        }
        LossMethod::Mcl => {
            black_box(mcl_from_cost(black_box(costs)));
        }
    }
}

fn noise_set(rng: &mut SplitMix64, n: usize, l: usize) -> SourceSet {
    SourceSet::from_raw(
        (0..n)
            .map(|_| Signal::from_raw((0..l).map(|_| rng.next_normal()).collect()))
            .collect(),
    )
}

/// Times the loss computation for every method at every requested size.
///
/// For each `n`, the same pair of seeded random source sets is used across
/// all methods; the exhaustive method drops out above its factorial guard.
/// Each (n, method) yields three rows: the cost-matrix build, the
/// assignment solve on the pre-built matrix, and the two together.
pub fn bench_losses(
    n_values: &[usize],
    l: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    if n_values.is_empty() || trials == 0 || l == 0 {
        return Err(Error::InvalidArgument(
            "need at least one size, one trial and a positive length",
        ));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "sizes must be strictly ascending",
        ));
    }

    let mut rows = Vec::new();
    for &n in n_values {
        let mut rng = SplitMix64::stream(seed, n as u64);
        let targets = noise_set(&mut rng, n, l);
        let predictions = noise_set(&mut rng, n, l);
        let costs = cost_matrix(&targets, &predictions)?;

        let mut methods = vec![
            LossMethod::PitHungarian,
            LossMethod::SinkPit,
            LossMethod::Mcl,
        ];
        if n <= crate::assignment::EXHAUSTIVE_MAX_N {
            methods.insert(0, LossMethod::PitExhaustive);
        }

        for method in methods {
            let (mean, std) = measure(trials, || {
                black_box(cost_matrix(black_box(&targets), black_box(&predictions)).unwrap());
            });
            rows.push(BenchRow {
                n,
                method,
                phase: BenchPhase::CostMatrix,
                mean_time: mean,
                std_time: std,
                trials,
            });

            let (mean, std) = measure(trials, || solve_assignment(method, &costs));
            rows.push(BenchRow {
                n,
                method,
                phase: BenchPhase::Assignment,
                mean_time: mean,
                std_time: std,
                trials,
            });

            let (mean, std) = measure(trials, || {
                let c = cost_matrix(black_box(&targets), black_box(&predictions)).unwrap();
                solve_assignment(method, &c);
            });
            rows.push(BenchRow {
                n,
                method,
                phase: BenchPhase::Total,
                mean_time: mean,
                std_time: std,
                trials,
            });
        }
    }
    Ok(rows)
}

/// Ordinary least-squares slope of `log(mean_time)` against `log(n)` for
/// one (method, phase) series. Needs at least four distinct sizes.
pub fn fit_loglog_slope(rows: &[BenchRow], method: LossMethod, phase: BenchPhase) -> Result<f64> {
    let mut points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.method == method && r.phase == phase && r.mean_time > 0.0)
        .map(|r| ((r.n as f64).ln(), r.mean_time.ln()))
        .collect();
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    points.dedup_by(|a, b| a.0 == b.0);
    if points.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    Ok(sxy / sxx)
}
