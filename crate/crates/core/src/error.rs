use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the separation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signal length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("reference signal has zero norm; SI-SDR is undefined")]
    ZeroNormReference,

    #[error("signal must contain at least one sample")]
    EmptySignal,

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("source set must contain at least one signal")]
    EmptySourceSet,

    #[error("source count mismatch: {targets} targets vs {predictions} predictions")]
    SourceCountMismatch { targets: usize, predictions: usize },

    #[error("cost matrix must be square: row {row} has {cols} columns, expected {expected}")]
    RaggedMatrix {
        row: usize,
        cols: usize,
        expected: usize,
    },

    #[error("non-finite cost at ({row}, {col})")]
    NonFiniteCost { row: usize, col: usize },

    #[error("exhaustive search supports at most {limit} sources, got {n}")]
    TooManySources { n: usize, limit: usize },

    #[error("regularization strength must be positive, got {epsilon}")]
    InvalidEpsilon { epsilon: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("expected an MCL loss report, got {got}")]
    MethodMismatch { got: &'static str },

    #[error("training diverged at step {step}: loss = {loss}")]
    Divergence { step: usize, loss: f64 },

    #[error("synthesis spec invalid: {0}")]
    InvalidSynthSpec(String),

    #[error("not enough data points: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("{path}: {source}")]
    Wav {
        path: PathBuf,
        #[source]
        source: WavError,
    },

    #[error("scene count mismatch: {references} reference scenes vs {estimates} estimate scenes")]
    SceneCountMismatch {
        references: usize,
        estimates: usize,
    },

    #[error("scene {scene}: {references} reference files vs {estimates} estimate files")]
    SceneFileCountMismatch {
        scene: String,
        references: usize,
        estimates: usize,
    },

    #[error(
        "scene {scene}: length spread beyond 1% truncation tolerance ({min} vs {max} frames)"
    )]
    SceneLengthSpread {
        scene: String,
        min: usize,
        max: usize,
    },

    #[error("no scenes found under {0}")]
    NoScenes(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// WAV container/codec errors, reported distinctly so callers can tell a
/// malformed header from an unsupported layout.
#[derive(Debug, Error)]
pub enum WavError {
    #[error("missing RIFF magic")]
    NotRiff,

    #[error("RIFF form type is not WAVE")]
    NotWave,

    #[error("missing {0} chunk")]
    MissingChunk(&'static str),

    #[error("unsupported channel count {0}, only mono is handled")]
    UnsupportedChannels(u16),

    #[error("unsupported codec tag {0:#06x}, only PCM and IEEE float are handled")]
    UnsupportedCodec(u16),

    #[error("unsupported bit depth {bits} for codec tag {codec:#06x}")]
    UnsupportedBitDepth { codec: u16, bits: u16 },

    #[error("file truncated while reading {0}")]
    Truncated(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
