//! Shared numerical kernels: tanh-sinh quadrature for integrands with
//! algebraic endpoint singularities, safeguarded root finding, accelerated
//! summation of slowly convergent series, and log-gamma/beta machinery.
//!
//! Everything here works in binary64 and is pure: no global state, safe to
//! call from any number of threads.

pub mod gamma;
pub mod ode;
pub mod quadrature;
pub mod root;
pub mod series;

pub use gamma::{beta, inc_beta_reg, ln_beta, ln_gamma, pochhammer};
pub use quadrature::{integrate, tanh_sinh, QuadratureSpec};
pub use root::{find_root, find_root_newton};
pub use series::{sum_alternating, sum_levin_u};

use serde::Serialize;

/// A numerically computed value together with a heuristic absolute error
/// estimate. `err_est` is a working estimate, not a rigorous enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub err_est: f64,
    /// Number of terms or nodes consumed, when the producer counts them.
    pub terms_used: usize,
    /// Set when the input sat close enough to a singular limit that the
    /// estimate should be treated with suspicion (e.g. modulus k -> 1).
    pub near_singular: bool,
}

impl EvalResult {
    pub fn new(value: f64, err_est: f64) -> Self {
        debug_assert!(err_est >= 0.0 && err_est.is_finite());
        EvalResult {
            value,
            err_est,
            terms_used: 0,
            near_singular: false,
        }
    }

    pub fn with_terms(mut self, terms_used: usize) -> Self {
        self.terms_used = terms_used;
        self
    }

    pub fn with_near_singular(mut self, flag: bool) -> Self {
        self.near_singular = flag;
        self
    }
}
