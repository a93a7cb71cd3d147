use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The Fock cutoff is too small for the requested state or evolution.
    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("singular denominator: {0}")]
    SingularDenominator(String),

    /// 3δ² = 2ε removes the quadratic correction the ratios are normalized by.
    #[error(
        "degenerate GUP model: 3*delta^2 - 2*epsilon = 0 (delta = {delta}, epsilon = {epsilon})"
    )]
    DegenerateModel { delta: f64, epsilon: f64 },

    #[error("not in the dispersive regime: |detuning| / (lambda * sqrt(ncut)) = {ratio:.3} < 10")]
    DispersiveRegime { ratio: f64 },

    /// First-order Taylor expansion of the n² phase is no longer valid.
    #[error(
        "linear expansion invalid: 2*phi*mu*t*<n^2> = {parameter:.3e} >= 0.1 (time bound 1/(phi*mu) = {time_bound:.3e} s)"
    )]
    Linearity { parameter: f64, time_bound: f64 },

    #[error("integration error estimate {estimate:.3e} exceeds tolerance {tolerance:.1e}")]
    Integration { estimate: f64, tolerance: f64 },

    #[error("eigendecomposition failed: {0}")]
    LinearAlgebra(String),
}

pub type Result<T> = std::result::Result<T, Error>;
