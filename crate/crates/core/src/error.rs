use thiserror::Error;

/// Errors raised by the model, pricers and simulators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Model parameters violate a structural invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The Riccati integration diverged.
    #[error("solver failure at t={time}: |C|={magnitude:e} exceeds the blow-up guard")]
    SolverFailure { time: f64, magnitude: f64 },

    /// A transform inversion did not reach its tolerance.
    #[error("inversion did not converge: {method}, last two estimates {estimate:e} vs {previous:e}")]
    NotConverged {
        method: &'static str,
        estimate: f64,
        previous: f64,
    },

    /// A simulator would exceed a configured resource cap.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Model file or curve document could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
