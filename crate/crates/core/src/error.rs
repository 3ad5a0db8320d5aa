use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input (bad shapes, unknown ids, invalid parameters).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// No assignment satisfies the requested constraint.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// An enumeration or search exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
