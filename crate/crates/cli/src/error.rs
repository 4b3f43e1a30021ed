use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{}: {reason}", path.display())]
    Input { path: PathBuf, reason: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Core(#[from] qdiscrim_core::Error),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// 1 for failed checks and runtime errors, 2 for bad arguments, 3 for
    /// unreadable or invalid input files.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::InvalidGrid(_) => 2,
            CliError::Input { .. } => 3,
            CliError::Core(
                qdiscrim_core::Error::ParameterOutOfRange { .. }
                | qdiscrim_core::Error::InvalidPriors { .. },
            ) => 2,
            CliError::Verification(_) | CliError::Core(_) | CliError::Output(_) => 1,
        }
    }
}
