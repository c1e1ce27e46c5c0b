//! Bracketed root finding: a derivative-free Illinois-type secant/bisection
//! hybrid and a safeguarded Newton for when the derivative is cheap.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Find a root of `g` in `[lo, hi]` to bracket width `tol`.
///
/// Requires a sign change over the bracket. Uses modified regula falsi
/// (Illinois) with a bisection safeguard, so the returned point always lies
/// inside the initial bracket.
pub fn find_root<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::InvalidInterval { a: lo, b: hi });
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = g(a);
    let mut fb = g(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo, hi });
    }

    let mut side = 0i8;
    for _ in 0..MAX_ITER {
        if (b - a).abs() <= tol {
            return Ok(0.5 * (a + b));
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        // Keep the trial point strictly interior; otherwise bisect.
        if !x.is_finite() || x <= a || x >= b {
            x = 0.5 * (a + b);
        }
        let fx = g(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                // Illinois trick: halve the stale endpoint's weight.
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::NonConvergence {
        what: "bracketed root finding",
        err_est: (b - a).abs(),
        tol,
    })
}

/// Safeguarded Newton iteration on `[lo, hi]` with bisection fallback.
///
/// `g` returns the function value and its derivative. A Newton step is taken
/// only while it stays inside the current bracket and keeps shrinking it;
/// anything else falls back to bisection, so convergence is guaranteed for
/// continuous g with a sign change.
pub fn find_root_newton<F: Fn(f64) -> (f64, f64)>(
    g: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::InvalidInterval { a: lo, b: hi });
    }
    let (flo, _) = g(lo);
    if flo == 0.0 {
        return Ok(lo);
    }
    let (fhi, _) = g(hi);
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }

    // Orient so g(xl) < 0 < g(xh).
    let (mut xl, mut xh) = if flo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = 0.5 * (lo + hi);
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let (mut f, mut df) = g(x);

    for _ in 0..MAX_ITER {
        let newton_escapes =
            ((x - xh) * df - f) * ((x - xl) * df - f) > 0.0 || 2.0 * f.abs() > (dx_old * df).abs();
        if newton_escapes {
            dx_old = dx;
            dx = 0.5 * (xh - xl);
            x = xl + dx;
            if x == xl {
                return Ok(x);
            }
        } else {
            dx_old = dx;
            dx = f / df;
            let prev = x;
            x -= dx;
            if x == prev {
                return Ok(x);
            }
        }
        if dx.abs() < tol {
            return Ok(x);
        }
        let (nf, ndf) = g(x);
        f = nf;
        df = ndf;
        if f < 0.0 {
            xl = x;
        } else {
            xh = x;
        }
    }
    Err(Error::NonConvergence {
        what: "safeguarded Newton",
        err_est: dx.abs(),
        tol,
    })
}
