use thiserror::Error;

/// Errors raised by the learners, oracle, and game harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FplError {
    #[error("cost {value} for expert {index} is outside [0, 1]")]
    CostOutOfRange { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("at least one expert is required")]
    NoExperts,
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("exact oracle supports at most {cap} experts, got {n}")]
    ExactOracleCap { n: usize, cap: usize },
    #[error("selection probability {prob:e} of expert {index} fell below the numerical guard")]
    ProbabilityUnderflow { index: usize, prob: f64 },
    #[error("bandit feedback violated: {0}")]
    FeedbackViolation(&'static str),
}

pub type Result<T> = core::result::Result<T, FplError>;
