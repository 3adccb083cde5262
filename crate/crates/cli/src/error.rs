use std::io;
use std::path::PathBuf;

use nomasec_core::Metric;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] nomasec_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error(
        "metric {metric} needs an external eavesdropper but the configuration is in no-eve mode"
    )]
    ModeMismatch { metric: Metric },

    #[error("{}:{line}: {msg}", path.display())]
    ConfigFile {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
