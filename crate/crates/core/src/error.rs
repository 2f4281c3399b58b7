use thiserror::Error;

/// Errors raised by the solver, enumerator, oracles and simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("threshold {num}/{den} must lie strictly between 0 and 1")]
    InvalidThreshold { num: u64, den: u64 },

    #[error("prior parameters must be positive integers (alpha={alpha}, beta={beta})")]
    InvalidPrior { alpha: u64, beta: u64 },

    #[error("m must be a positive integer")]
    InvalidM,

    #[error("prior mean exceeds threshold")]
    PriorAboveThreshold,

    #[error("delta out of range: {0}")]
    DeltaOutOfRange(f64),

    #[error("infinite strategy needs delta < 1, got {0}")]
    InfiniteAtUnitDiscount(f64),

    #[error("strategy is empty")]
    EmptyStrategy,

    #[error("cannot parse strategy at position {position}: {reason}")]
    Parse {
        position: usize,
        reason: &'static str,
    },

    #[error("strategy crosses the threshold before its last action (period {period})")]
    Infeasible { period: usize },

    #[error("incomplete strategy: final action does not cross the threshold")]
    IncompleteStrategy,

    #[error("threshold {num}/{den} is not of the form 1/(m+1)")]
    NotUnitThreshold { num: u64, den: u64 },

    #[error("horizon {horizon} exceeds the limit of {limit}")]
    HorizonTooLarge { horizon: usize, limit: usize },

    #[error("state space of {states} slack levels exceeds the limit of {limit}")]
    StateSpaceTooLarge { states: u128, limit: u128 },

    #[error("probability out of range: {0}")]
    ProbabilityOutOfRange(f64),

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
