//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by constructors, quadrature, and the statistics layer.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-side contract was violated (non-unit vector, unnormalized
    /// spectrum, stale grid).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A computation produced a non-finite value or an ill-conditioned solve.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The requested quantity diverges at these parameters.
    #[error("divergent result: {0}")]
    Divergent(String),

    /// The requested quantity is undefined at these parameters (e.g. a
    /// correlation at vanishing flux).
    #[error("undefined result: {0}")]
    Undefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
