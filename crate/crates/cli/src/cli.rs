//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permsep_core::losses::LossMethod;
use permsep_core::synth::SourceKind;
use permsep_core::trainer::OptimizerKind;

#[derive(Parser, Debug)]
#[command(
    name = "permsep",
    version,
    about = "Permutation-resolution training objectives for source separation: \
             benchmark, train and evaluate PIT, SinkPIT and MCL"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every stochastic fixture.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print a machine-readable JSON object instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Also write results as CSV to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,

    /// Also write a line chart as SVG to this path (bench and train).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Time the loss computation per method and fit log-log complexity slopes.
    Bench(BenchArgs),
    /// Optimize free predictions against one objective on a synthetic scene.
    Train(TrainArgs),
    /// Train PIT, SinkPIT and MCL from a shared seed and compare outcomes.
    Compare(CompareArgs),
    /// Score estimate WAVs against reference WAVs, scene by scene.
    Eval(EvalArgs),
    /// Solve one assignment problem on a cost matrix read from CSV.
    Assign(AssignArgs),
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated speaker counts, strictly ascending.
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64, 128, 256])]
    pub sizes: Vec<usize>,

    /// Signal length in frames for the timed workloads.
    #[arg(long, default_value_t = 256)]
    pub length: usize,

    /// Timing trials per measurement.
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LossArg {
    PitHungarian,
    PitExhaustive,
    Sinkpit,
    Mcl,
}

impl From<LossArg> for LossMethod {
    fn from(value: LossArg) -> Self {
        match value {
            LossArg::PitHungarian => LossMethod::PitHungarian,
            LossArg::PitExhaustive => LossMethod::PitExhaustive,
            LossArg::Sinkpit => LossMethod::SinkPit,
            LossArg::Mcl => LossMethod::Mcl,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Sinusoid,
    Noise,
    Harmonic,
}

impl From<KindArg> for SourceKind {
    fn from(value: KindArg) -> Self {
        match value {
            KindArg::Sinusoid => SourceKind::Sinusoid,
            KindArg::Noise => SourceKind::Noise,
            KindArg::Harmonic => SourceKind::Harmonic,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OptimizerArg {
    AdaptiveMoment,
    GradientDescent,
}

impl From<OptimizerArg> for OptimizerKind {
    fn from(value: OptimizerArg) -> Self {
        match value {
            OptimizerArg::AdaptiveMoment => OptimizerKind::AdaptiveMoment,
            OptimizerArg::GradientDescent => OptimizerKind::GradientDescent,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SceneArgs {
    /// Speaker count of the synthetic scene.
    #[arg(long, short = 'n', default_value_t = 4)]
    pub sources: usize,

    /// Scene length in frames.
    #[arg(long, default_value_t = 1024)]
    pub length: usize,

    /// Source family.
    #[arg(long, value_enum, default_value_t = KindArg::Sinusoid)]
    pub kind: KindArg,
}

impl SceneArgs {
    pub fn kind_name(&self) -> &'static str {
        SourceKind::from(self.kind).name()
    }
}

#[derive(Args, Debug, Clone)]
pub struct TrainKnobs {
    /// Optimization steps.
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,

    /// Learning rate.
    #[arg(long, default_value_t = 0.02)]
    pub learning_rate: f64,

    /// Parameter update rule.
    #[arg(long, value_enum, default_value_t = OptimizerArg::AdaptiveMoment)]
    pub optimizer: OptimizerArg,

    /// Initialization scale relative to target RMS.
    #[arg(long, default_value_t = 0.1)]
    pub init_scale: f64,

    /// Sinkhorn regularization strength (SinkPIT only).
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,

    /// Metric logging stride in steps.
    #[arg(long, default_value_t = 50)]
    pub log_every: usize,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Training objective.
    #[arg(long, value_enum, default_value_t = LossArg::PitHungarian)]
    pub loss: LossArg,

    #[command(flatten)]
    pub scene: SceneArgs,

    #[command(flatten)]
    pub knobs: TrainKnobs,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub scene: SceneArgs,

    #[command(flatten)]
    pub knobs: TrainKnobs,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Directory of reference scenes.
    #[arg(long, value_name = "DIR")]
    pub refs: PathBuf,

    /// Directory of estimate scenes.
    #[arg(long, value_name = "DIR")]
    pub ests: PathBuf,

    /// Remove each signal's mean before scoring.
    #[arg(long)]
    pub zero_mean: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Hungarian,
    Exhaustive,
    Sinkhorn,
}

#[derive(Args, Debug)]
pub struct AssignArgs {
    /// Cost matrix CSV: n rows of n comma-separated floats, no header.
    #[arg(long, value_name = "FILE")]
    pub cost: PathBuf,

    /// Assignment solver.
    #[arg(long, value_enum, default_value_t = SolverArg::Hungarian)]
    pub method: SolverArg,

    /// Sinkhorn regularization strength.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,

    /// Sinkhorn iteration cap.
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,

    /// Sinkhorn marginal tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}
