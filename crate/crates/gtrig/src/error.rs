use thiserror::Error;

/// Errors produced by the numerical kernels and the special functions
/// built on top of them.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument fell outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Integration bounds with `a >= b`.
    #[error("invalid interval: a = {a} must be strictly below b = {b}")]
    InvalidInterval { a: f64, b: f64 },

    /// An iterative scheme exhausted its budget above the requested tolerance.
    #[error("failed to converge: {what} (best error estimate {err_est:e}, tolerance {tol:e})")]
    NonConvergence {
        what: &'static str,
        err_est: f64,
        tol: f64,
    },

    /// Root bracketing failed: same sign at both endpoints.
    #[error("no bracket: g({lo}) and g({hi}) have the same sign")]
    NoBracket { lo: f64, hi: f64 },

    /// Evaluation requested inside the guard band around a pole.
    #[error("pole: x = {x} is within {guard:e} of a pole of the function")]
    Pole { x: f64, guard: f64 },

    /// The requested operation does not apply in this parameter regime.
    #[error("regime error: {0}")]
    Regime(String),

    /// The adaptive ODE integrator could not take a step above its minimum size.
    #[error("step failure: step size underflowed to {h:e} at t = {t}")]
    StepFailure { t: f64, h: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
