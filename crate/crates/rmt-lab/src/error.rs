//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
///
/// The CLI maps these onto process exit codes: config errors exit with 2,
/// numeric errors with 3, I/O errors with 4.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A numerical procedure failed (non-convergence, invalid result).
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Configuration file or override could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),
    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
