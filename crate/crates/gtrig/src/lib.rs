//! Generalized trigonometric functions sin_{p,q}, cos_{p,q}, tau_{p,q} with
//! two exponent parameters, the generalized Jacobi elliptic layer built on
//! them (am_{p,q}, K_{p,q}, sn_{p,q}, tanh_q), numerical verification of
//! their multiple-angle/product/series identities, and the two flagship
//! applications: the p-Laplacian pendulum and p-Laplacian eigenpairs.
//!
//! Layout:
//! - [`numerics`]: tanh-sinh quadrature, bracketed root finding, series
//!   acceleration, log-gamma/beta kernels, and a small adaptive ODE solver.
//! - [`trig`]: `Params` and the forward/inverse generalized trig functions.
//! - [`elliptic`]: modulus-dependent amplitude layer and tanh_q.
//! - [`identities`]: residual checks and the reporting suite.
//! - [`constants`]: series and integral representations of the generalized
//!   pi values, Catalan-type constants, and the lemniscatic series.
//! - [`pendulum`], [`eigen`]: the p-Laplacian applications.
//!
//! All evaluation is binary64 and pure; every public type is safe to share
//! across threads.

pub mod constants;
pub mod eigen;
pub mod elliptic;
mod error;
pub mod identities;
pub mod numerics;
pub mod pendulum;
pub mod trig;

pub use error::{Error, Result};
pub use numerics::EvalResult;
pub use trig::{arctau_star, Params};
