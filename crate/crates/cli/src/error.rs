//! Errors reported by the command line and the service.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tcurve_core::Error),

    #[error("cannot access {}: {source}", path.display())]
    File { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    /// A verification ran to completion and found failures.
    #[error("{0}")]
    Check(String),

    #[error("service failure: {0}")]
    Service(#[from] std::io::Error),
}

impl CliError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "core",
            CliError::File { .. } => "file",
            CliError::Usage(_) => "usage",
            CliError::Check(_) => "check",
            CliError::Service(_) => "service",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(_) => 3,
            CliError::File { .. } => 4,
            CliError::Service(_) => 5,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn read(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::File { path: path.into(), source })
}

pub(crate) fn write(path: &std::path::Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::File { path: path.into(), source })
}
