use thiserror::Error;

/// Errors raised by model construction, evaluation and the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Model parameters violate the validity conditions of their family.
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),

    /// An enumeration was requested beyond its size guard.
    #[error("size error: {what} = {value} exceeds the limit {limit}")]
    Size {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// A series or iterative scheme failed to reach its tolerance.
    #[error("no convergence after {terms} terms (error estimate {estimate:e})")]
    NonConvergence { terms: usize, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
