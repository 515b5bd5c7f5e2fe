use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument left the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A measure or profile description violates a structural invariant.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A sweep or sum would exceed the configured work budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A truncated sum failed its convergence diagnostic.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// An operation is only defined for a subset of measure models.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Configuration file errors.
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
