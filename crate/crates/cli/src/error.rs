use thiserror::Error;

/// Failures that stop a run before any verdict; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] hardy_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("cannot build the thread pool: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
