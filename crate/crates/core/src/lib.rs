//! Permutation-resolution training objectives for source separation.
//!
//! When a separation model emits `n` estimates for `n` ground-truth
//! sources, something has to decide which estimate answers for which
//! source. This crate implements the three standard ways of resolving that
//! ambiguity over a shared pairwise loss (negated, clamped SI-SDR):
//!
//! - **PIT** — the exact optimal permutation, found exhaustively (O(n!))
//!   or by the Hungarian algorithm (O(n^3));
//! - **SinkPIT** — an entropy-regularized relaxation over doubly
//!   stochastic plans, solved by log-domain Sinkhorn iteration (O(n^2/eps));
//! - **MCL** — winner-takes-all: each target is claimed by its cheapest
//!   prediction, with no exclusivity (O(n^2)), at the price of possible
//!   collapse.
//!
//! Around the objectives sit the pieces needed to study them end to end:
//! evaluation metrics (optimal-permutation SI-SDR, the AUC-SDR consistency
//! score, collapse rate), deterministic synthetic scenes, a free-parameter
//! trainer for desk-scale experiments, a phase-separated timing harness for
//! complexity comparisons, and WAV ingestion for evaluating real files.

pub mod assignment;
pub mod error;
pub mod eval;
pub mod losses;
pub mod metrics;
pub mod rng;
pub mod sdr;
pub mod signal;
pub mod synth;
pub mod timing;
pub mod trainer;
pub mod wav;

pub use assignment::{
    exhaustive_best_permutation, hungarian, plan_entropy, plan_to_permutation, sinkhorn,
    AssignmentResult, Permutation, TransportPlan,
};
pub use error::{Error, Result, WavError};
pub use eval::{eval_directories, EvalOptions, EvalReport, SceneScore};
pub use losses::{
    mcl_loss, pit_loss, sinkpit_loss, EpsilonSchedule, LossMethod, LossReport, MatchedPair,
    PitSolver,
};
pub use metrics::{
    auc_from_scores, auc_sdr, collapse_rate, optimal_perm_si_sdr, AucSdrReport, PairScores,
};
pub use sdr::{cost_matrix, neg_si_sdr, neg_si_sdr_grad, si_sdr, CostMatrix, SdrValue, CAP_DB};
pub use signal::{mix, Mixture, Signal, SourceSet};
pub use synth::{gen_scene, gen_sources, SourceKind, SynthSpec};
pub use timing::{bench_losses, fit_loglog_slope, BenchPhase, BenchRow};
pub use trainer::{
    compare_methods, train_direct, ComparisonRow, OptimizerKind, TrainConfig, TrainRecord,
    TrainTrajectory,
};
pub use wav::{load_wav, write_wav_pcm16, WavAsset};
