//! Crate-wide error type; variants map onto the CLI exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration: unsupported type/rank/prime, malformed input values.
    #[error("config: {0}")]
    Config(String),
    /// Structurally valid input outside an operation's domain.
    #[error("domain: {0}")]
    Domain(String),
    /// A computation refused because it exceeds a size bound.
    #[error("resource: {0}")]
    Resource(String),
    /// An internal identity failed; this means a bug or a falsified check, never bad input.
    #[error("falsified: {0}")]
    Falsified(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn falsified(msg: impl Into<String>) -> Self {
        Error::Falsified(msg.into())
    }
}
