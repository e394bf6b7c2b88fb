use thiserror::Error;

/// Errors surfaced by the engine.
///
/// Budget overruns are ordinary values, not panics: every exhaustive
/// enumeration checks its size against the configured budget first and
/// reports `BudgetExceeded` instead of running away.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HallError {
    #[error("oracle out of budget: needs {needed} enumeration steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("zero scalar inverse")]
    ZeroInverse,

    #[error("odd period required, got m = {0}")]
    OddPeriodRequired(usize),

    #[error("unsupported derived shape: {0}")]
    UnsupportedShape(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("quiver has a directed cycle")]
    CyclicQuiver,

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}
