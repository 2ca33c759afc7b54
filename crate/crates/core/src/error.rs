use std::io;

use thiserror::Error;

/// Errors produced by the library.
///
/// The variants line up with the CLI exit codes: domain and usage problems,
/// malformed input data, exhausted resource guards and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on parameters was violated (bad index, bad size, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Input data could not be parsed or violates a data invariant.
    #[error("data error: {0}")]
    Data(String),
    /// An enumeration would exceed its configured guard.
    #[error("resource guard exceeded: {0}")]
    Resource(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
