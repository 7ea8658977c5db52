//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A raw value lies outside the family's domain.
    #[error("domain violation for {family}: {reason}")]
    DomainViolation { family: String, reason: String },

    /// A natural-parameter vector violates an open-interval bound.
    #[error("natural parameter [{index}] = {value} violates bound {bound}")]
    InfeasibleParams {
        index: usize,
        value: f64,
        bound: String,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Model-level validation failure (improper conditionals, bad blocks, ...).
    #[error("model validation failed: {0}")]
    Validation(String),

    /// The per-sample conditional parameter became infeasible; carries the
    /// sample index when known.
    #[error("infeasible conditional parameter{}: {reason}", sample.map(|i| format!(" at sample {i}")).unwrap_or_default())]
    InfeasibleConditional {
        sample: Option<usize>,
        reason: String,
    },

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(family: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::DomainViolation {
            family: family.into(),
            reason: reason.into(),
        }
    }
}
