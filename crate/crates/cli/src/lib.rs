//! Command line front end: file formats, dispatch and reports.

pub mod commands;
pub mod format;
pub mod report;

use thiserror::Error;

pub use commands::{run, Cli};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] stograph::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("conflicting verdicts from {0} and {1}")]
    Conflict(String, String),
}

impl CliError {
    /// Process exit code: 2 for bad input, 3 for an internal inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Conflict(..) => 3,
            CliError::Core(stograph::Error::Internal(_)) => 3,
            _ => 2,
        }
    }
}
