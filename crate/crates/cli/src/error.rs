//! Error taxonomy matching the process exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or configuration (exit code 1).
    #[error("{0}")]
    Usage(String),
    /// Numerical or runtime failure during a run (exit code 2).
    #[error("{0}")]
    Numerical(String),
    /// A definiteness expectation failed (exit code 3).
    #[error("{0}")]
    Certification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Certification(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numerical(format!("i/o failure: {e}"))
    }
}
