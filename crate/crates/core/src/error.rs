//! Error type shared by every crate in the workspace.

use thiserror::Error;

/// Failures raised by oracles, testers, generators and the CLI.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KmtError {
    /// A full-read or enumeration routine was asked to handle more than its limit.
    #[error("budget exceeded in {what}: requested {requested}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    /// The caller broke a documented precondition.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    /// A generator could not meet its structural constraints.
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    /// A tester exhausted its hard query cap.
    #[error("query budget exceeded: used {used}, cap {cap}")]
    QueryBudgetExceeded { used: u64, cap: u64 },
    /// Malformed input (function files, configs, parameters).
    #[error("parse error: {0}")]
    Parse(String),
    /// Parameters outside their valid range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Workspace-wide result alias.
pub type Result<T> = std::result::Result<T, KmtError>;

impl KmtError {
    /// Shorthand for [`KmtError::BudgetExceeded`] with `usize` sizes.
    pub fn budget(what: &'static str, requested: usize, limit: usize) -> Self {
        KmtError::BudgetExceeded {
            what,
            requested: requested as u128,
            limit: limit as u128,
        }
    }
}
