use thiserror::Error;

/// Errors raised by the numerical pipelines.
///
/// Values are carried as `f64` regardless of the scalar type of the
/// computation that produced them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rate b_{index} = {value} is negative")]
    NegativeRate { index: usize, value: f64 },

    #[error("death rate b_0 = {0} must be positive")]
    ZeroDeathRate(f64),

    #[error("no birth mass: sum of b_j over j >= 2 is {0}")]
    NoBirthMass(f64),

    #[error("b_1 = {b1} does not balance the other rates (expected {expected})")]
    ConservationViolation { b1: f64, expected: f64 },

    #[error("law is not subcritical (B'(1) = {bprime1})")]
    NotSubcritical { bprime1: f64 },

    #[error("quadrature tolerance {rel_tol} not met (estimated error {err_estimate})")]
    ToleranceNotMet { rel_tol: f64, err_estimate: f64 },

    #[error("maximizer of phi found at the scan boundary s = {s}")]
    MaximizerAtBoundary { s: f64 },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("bad truncation: {0}")]
    BadTruncation(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no stable slope window in the survival curve")]
    NoStableWindow,

    #[error("invalid simulation configuration: {0}")]
    InvalidSeedConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
