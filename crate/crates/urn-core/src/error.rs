//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its documented range (includes NaN).
    #[error("{field} must satisfy {bound}, got {value}")]
    InvalidParameter {
        field: &'static str,
        bound: &'static str,
        value: f64,
    },

    /// A caller broke an operation's contract (missing argument, empty
    /// input, wrong kind of histogram, ...).
    #[error("contract violation: {0}")]
    Contract(&'static str),

    /// A fit or estimate was requested with too few usable data points.
    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// An exact computation was requested beyond its hard size budget.
    #[error("{what} = {requested} exceeds the exact-computation budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
