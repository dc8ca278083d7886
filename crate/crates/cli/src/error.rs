use std::io;

use thiserror::Error;

/// Exit status for a command that ran to completion.
pub const EXIT_OK: u8 = 0;
/// Coherence findings or an infeasible fit.
pub const EXIT_INCOHERENT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Syntax or schema error in a config file, with position when known.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    /// Well-formed config whose values break a model invariant.
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Config(_) => EXIT_USAGE,
            CliError::Runtime(_) | CliError::Io(_) | CliError::Csv(_) => EXIT_RUNTIME,
        }
    }
}

impl From<fcg_core::Error> for CliError {
    fn from(e: fcg_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
