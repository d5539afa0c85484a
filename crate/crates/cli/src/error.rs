use std::path::PathBuf;

use thiserror::Error;

/// Every failure the CLI can report, each tied to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed state file {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Core(#[from] weylswap_core::Error),

    #[error("{0}")]
    Precondition(String),

    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Parse { .. } | CliError::Argument(_) => exit::PARSE,
            CliError::Core(_) | CliError::Precondition(_) => exit::PRECONDITION,
            CliError::Write(_) => exit::PRECONDITION,
        }
    }
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFICATION: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const PRECONDITION: i32 = 3;
}
