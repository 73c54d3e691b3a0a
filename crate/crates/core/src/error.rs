use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input: mismatched dimensions, bad indices, non-finite entries.
    #[error("invalid input: {0}")]
    Input(String),
    /// Input is well-formed but lies outside the region where the operation is valid.
    #[error("domain violation: {0}")]
    Domain(String),
    /// A configured size or cost cap would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// An iterative method stopped before reaching its tolerance.
    #[error("did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
