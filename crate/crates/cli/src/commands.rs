//! Subcommand implementations and the error-to-exit-code policy.

mod assign;
mod bench;
mod compare;
mod eval;
mod train;

pub use assign::run_assign;
pub use bench::run_bench;
pub use compare::run_compare;
pub use eval::run_eval;
pub use train::run_train;

use permsep_core::error::Error as CoreError;

/// CLI failure classes. Exit codes: usage 1, data 2, numerical 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Divergence { .. } => CliError::Numerical(err.to_string()),
            CoreError::InvalidEpsilon { .. }
            | CoreError::InvalidArgument(_)
            | CoreError::TooManySources { .. }
            | CoreError::InvalidSynthSpec(_)
            | CoreError::InsufficientData { .. } => CliError::Usage(err.to_string()),
            _ => CliError::Data(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

pub type CliResult = Result<(), CliError>;
