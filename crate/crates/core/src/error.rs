use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{field}` out of range: {value} ({expected})")]
    OutOfRange {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("parameter `{field}` is not finite")]
    NonFinite { field: &'static str },

    #[error("degenerate state: alpha + beta must be positive")]
    DegenerateState,

    #[error("degenerate denominator: p + omega * pbar = 0")]
    DegenerateDenominator,

    #[error("invalid scaling index {0}: must be >= 1")]
    InvalidScale(u64),

    #[error("trajectory crossed the discontinuity line more than {cap} times")]
    ChatterDetected { cap: usize },

    #[error("occupancy targets {a} and {b} overlap for epsilon {epsilon}")]
    OverlappingTargets { a: f64, b: f64, epsilon: f64 },

    #[error("burn-in {burn_in} must be smaller than the trajectory length {len}")]
    BurnInTooLarge { burn_in: usize, len: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
