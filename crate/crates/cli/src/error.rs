use thiserror::Error;

/// Failures that stop a command before any verdict (exit code 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] lie_semigroup::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
