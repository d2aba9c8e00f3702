//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;

/// Errors produced by the library.
///
/// The three broad classes map onto distinct CLI exit codes: invalid
/// configuration/parameters, bad or insufficient data, and numeric failures
/// (overflow, non-convergence, infeasibility).
#[derive(Debug, Error)]
pub enum CoreError {
    /// A parameter or configuration value violates its contract.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Input data violates an invariant (bad CSV cell, duplicate date, ...).
    #[error("data error: {0}")]
    Data(String),

    /// A numeric routine failed (overflow, infeasible bound, no convergence).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CoreError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CoreError::InvalidParameter(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CoreError::Data(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CoreError::Numeric(msg.into())
    }
}
