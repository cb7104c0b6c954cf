use std::path::PathBuf;

use chitbl_core::chitab::{EvalError, FormatError};
use chitbl_core::tablegen::TableGenError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Range(#[from] EvalError),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cannot {action} {path}: {source}")]
    Io { action: &'static str, path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("build failed: {0}")]
    Build(#[from] TableGenError),
}

impl CliError {
    /// 2 usage, 3 range, 4 verification, 5 I/O or format, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Range(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Io { .. } | CliError::Format { .. } => 5,
            CliError::Build(_) => 1,
        }
    }
}
