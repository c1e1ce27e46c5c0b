//! Closed-form eigenpairs of the one-dimensional p-Laplacian
//!
//!   -(|u'|^(p-2) u')' = lambda |u|^(q-2) u
//!
//! under Dirichlet or (for q = p*) Neumann boundary conditions on (0, L),
//! and the product construction that turns a conjugate Dirichlet/Neumann
//! pair into an eigenfunction of the classical Laplacian-type problem
//! -w'' = xi |w|^(p*-2) w.

use crate::error::{Error, Result};
use crate::trig::{odd_pow, Params};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenKind {
    Dirichlet,
    Neumann,
}

/// A closed-form eigenpair: the eigenvalue and an evaluator for its
/// eigenfunction.
///
/// Dirichlet (any q): lambda = (q/p*) (n pi_{p,q} / L)^p |R|^(p-q) with
/// eigenfunction R sin_{p,q}(n pi_{p,q} x / L), which has n - 1 interior
/// zeros. Neumann requires q = p*: mu = (n pi_{p,p*} / L)^p |Q|^(p-p*) with
/// eigenfunction Q |cos_{p,p*}(a x)|^(p-2) cos_{p,p*}(a x), n interior zeros.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub kind: EigenKind,
    pub n: u32,
    pub length: f64,
    pub amplitude: f64,
    pub lambda: f64,
    params: Params,
    freq: f64,
}

impl EigenPair {
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// Spatial frequency n pi_{p,q} / L.
    pub fn freq(&self) -> f64 {
        self.freq
    }

    /// Evaluate the eigenfunction at x.
    pub fn eval(&self, x: f64) -> f64 {
        let arg = self.freq * x;
        match self.kind {
            EigenKind::Dirichlet => self.amplitude * self.params.sin(arg),
            EigenKind::Neumann => {
                self.amplitude * odd_pow(self.params.cos(arg), self.params.p() - 1.0)
            }
        }
    }

    /// Pointwise residual of the defining equation, with the divergence term
    /// expanded analytically (no finite differencing of fractional powers).
    pub fn residual(&self, x: f64) -> f64 {
        let p = self.params.p();
        let q = self.params.q();
        let p_star = self.params.p_star();
        let a = self.freq;
        let arg = a * x;
        match self.kind {
            EigenKind::Dirichlet => {
                // -(|u'|^(p-2) u')' = (q/p*) |Ra|^(p-1) sgn(R) a |sin|^(q-2) sin.
                let lhs = q / p_star
                    * odd_pow(self.amplitude * a, p - 1.0)
                    * a
                    * odd_pow(self.params.sin(arg), q - 1.0);
                let rhs = self.lambda * odd_pow(self.eval(x), q - 1.0);
                (lhs - rhs).abs()
            }
            EigenKind::Neumann => {
                // v' = -Q a |sin|^(p*-2) sin collapses the momentum to
                // -|Qa|^(p-2) Qa sin, hence -(...)' = |Qa|^(p-2) Qa a cos.
                let lhs = odd_pow(self.amplitude * a, p - 1.0) * a * self.params.cos(arg);
                let rhs = self.lambda * odd_pow(self.eval(x), q - 1.0);
                (lhs - rhs).abs()
            }
        }
    }

    /// Count strict sign changes over the open interval on a uniform grid,
    /// ignoring samples inside the dead band.
    pub fn count_interior_zeros(&self, samples: usize) -> usize {
        count_sign_changes(|x| self.eval(x), self.length, samples, self.amplitude.abs())
    }
}

fn count_sign_changes(
    f: impl Fn(f64) -> f64,
    length: f64,
    samples: usize,
    scale: f64,
) -> usize {
    let dead_band = 1e-12 * scale.max(1.0);
    let m = samples.max(16);
    let mut last_sign = 0i8;
    let mut changes = 0;
    for j in 1..m {
        let x = length * j as f64 / m as f64;
        let v = f(x);
        if v.abs() <= dead_band {
            continue;
        }
        let s = if v > 0.0 { 1 } else { -1 };
        if last_sign != 0 && s != last_sign {
            changes += 1;
        }
        last_sign = s;
    }
    changes
}

/// Build a closed-form eigenpair.
pub fn make_eigenpair(
    kind: EigenKind,
    p: f64,
    q: f64,
    n: u32,
    length: f64,
    amplitude: f64,
) -> Result<EigenPair> {
    if n == 0 {
        return Err(Error::Domain("mode index n must be at least 1".into()));
    }
    if !(length > 0.0) {
        return Err(Error::Domain(format!("interval length must be positive, got {length}")));
    }
    if amplitude == 0.0 || !amplitude.is_finite() {
        return Err(Error::Domain("amplitude must be nonzero and finite".into()));
    }
    let params = Params::new(p, q)?;
    if kind == EigenKind::Neumann {
        let p_star = params.p_star();
        if (q - p_star).abs() > 1e-12 * p_star {
            return Err(Error::Domain(format!(
                "Neumann closed form requires q = p* = {p_star}, got q = {q}"
            )));
        }
    }
    let freq = n as f64 * params.pi() / length;
    let lambda = match kind {
        EigenKind::Dirichlet => {
            q / params.p_star() * freq.powf(p) * amplitude.abs().powf(p - q)
        }
        EigenKind::Neumann => freq.powf(p) * amplitude.abs().powf(p - params.p_star()),
    };
    Ok(EigenPair {
        kind,
        n,
        length,
        amplitude,
        lambda,
        params,
        freq,
    })
}

/// Everything the product-eigenfunction construction yields for one mode.
#[derive(Debug, Clone, Serialize)]
pub struct ProductEigenReport {
    pub xi: f64,
    pub lambda: f64,
    pub mu: f64,
    /// max |u v - closed form| over the grid.
    pub closed_form_residual: f64,
    /// max residual of -w'' = xi |w|^(p*-2) w with w'' taken analytically.
    pub equation_residual: f64,
    pub max_residual: f64,
    pub zero_count: usize,
    pub expected_zeros: usize,
}

/// Verify that the product w = u v of the conjugate Dirichlet pair (mode n,
/// n - 1 interior zeros) and Neumann pair (n interior zeros) solves
/// -w'' = xi |w|^(p*-2) w with xi = 2 p* (lambda mu)^(1/p), equals
/// 2^(-2/p*) R Q sin_{2,p*}(2 n pi_{2,p*} x / L), and has 2n - 1 zeros.
pub fn product_eigen_check(
    p: f64,
    n: u32,
    length: f64,
    r_amp: f64,
    q_amp: f64,
    sample_count: usize,
) -> Result<ProductEigenReport> {
    let p_star = p / (p - 1.0);
    let u = make_eigenpair(EigenKind::Dirichlet, p, p_star, n, length, r_amp)?;
    let v = make_eigenpair(EigenKind::Neumann, p, p_star, n, length, q_amp)?;
    let (lambda, mu) = (u.lambda, v.lambda);
    let xi = 2.0 * p_star * (lambda * mu).powf(1.0 / p);

    let two_pstar = Params::new(2.0, p_star)?;
    let a_cf = 2.0f64.powf(-2.0 / p_star) * r_amp * q_amp;
    let b_cf = 2.0 * n as f64 * two_pstar.pi() / length;

    let m = sample_count.max(64);
    let mut closed_form_residual: f64 = 0.0;
    let mut equation_residual: f64 = 0.0;
    for j in 0..=m {
        let x = length * j as f64 / m as f64;
        let w_product = u.eval(x) * v.eval(x);
        let w_closed = a_cf * two_pstar.sin(b_cf * x);
        closed_form_residual = closed_form_residual.max((w_product - w_closed).abs());

        // w'' through the C^2 closed form and the p = 2 form of the
        // derivative chain: (cos_{2,q})' = -(q/2) |sin|^(q-2) sin.
        let w_dd = -a_cf * b_cf * b_cf * (p_star / 2.0)
            * odd_pow(two_pstar.sin(b_cf * x), p_star - 1.0);
        let eq = (-w_dd - xi * odd_pow(w_product, p_star - 1.0)).abs();
        equation_residual = equation_residual.max(eq);
    }

    let zero_count = count_sign_changes(
        |x| u.eval(x) * v.eval(x),
        length,
        m.max(2048),
        (r_amp * q_amp).abs(),
    );

    Ok(ProductEigenReport {
        xi,
        lambda,
        mu,
        closed_form_residual,
        equation_residual,
        max_residual: closed_form_residual.max(equation_residual),
        zero_count,
        expected_zeros: 2 * n as usize - 1,
    })
}
