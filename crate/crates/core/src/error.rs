use thiserror::Error;

/// Failures raised by the numerical pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge: estimated error {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergence { estimate: f64, tolerance: f64 },

    #[error("integrand returned a non-finite value at {at}")]
    NonFiniteSample { at: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("tail bound {bound:.3e} cannot be brought below {tolerance:.3e} within the truncation limit")]
    TailBoundExceeded { bound: f64, tolerance: f64 },

    #[error("log-gamma pole at non-positive integer {0}")]
    Pole(f64),

    #[error("loading is not self-balanced: |[[p]](0)| = {0:.3e}")]
    SelfBalanceViolation(f64),

    #[error("unsupported load: {0}")]
    UnsupportedLoad(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("geometry error: {0}")]
    Geometry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
