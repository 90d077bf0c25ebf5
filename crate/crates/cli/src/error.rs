use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] psat_core::Error),
}

impl CliError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse { line, message: message.into() }
    }

    /// 1 for infeasible, 2 for usage and parse problems, 3 for size guards.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(psat_core::Error::SizeGuard { .. }) => 3,
            CliError::Core(psat_core::Error::Infeasible) => 1,
            _ => 2,
        }
    }
}
