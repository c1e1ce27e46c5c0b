//! Series and integral representations of the conjugate-pair pi values,
//! Catalan-type constants G_p, the companion hypergeometric constants C_p,
//! and the four lemniscatic series.
//!
//! Term ratios are built incrementally from the hypergeometric recurrences
//! (never through raw Pochhammer products), so nothing overflows and the
//! alternating accelerator sees exact term magnitudes.

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, QuadratureSpec};
use crate::numerics::series::{sum_alternating, sum_levin_u};
use crate::numerics::EvalResult;
use crate::elliptic::EllipticParams;
use crate::trig::Params;
use serde::Serialize;
use std::cell::RefCell;

/// Series families exposed through the constants table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeriesFamily {
    GlPq,
    GP,
    CP,
    Lpi1,
    Lpi2,
    LpiEven,
    LpiOdd,
}

impl SeriesFamily {
    pub const ALL: [SeriesFamily; 7] = [
        SeriesFamily::GlPq,
        SeriesFamily::GP,
        SeriesFamily::CP,
        SeriesFamily::Lpi1,
        SeriesFamily::Lpi2,
        SeriesFamily::LpiEven,
        SeriesFamily::LpiOdd,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SeriesFamily::GlPq => "GL_PQ",
            SeriesFamily::GP => "G_P",
            SeriesFamily::CP => "C_P",
            SeriesFamily::Lpi1 => "LPI1",
            SeriesFamily::Lpi2 => "LPI2",
            SeriesFamily::LpiEven => "LPI_EVEN",
            SeriesFamily::LpiOdd => "LPI_ODD",
        }
    }

    pub fn needs_p(&self) -> bool {
        matches!(self, SeriesFamily::GlPq | SeriesFamily::GP | SeriesFamily::CP)
    }

    /// Short description of how the value is computed, for table output.
    pub fn representation(&self) -> &'static str {
        match self {
            SeriesFamily::GlPq | SeriesFamily::GP | SeriesFamily::Lpi1 => {
                "accelerated alternating series"
            }
            SeriesFamily::CP | SeriesFamily::Lpi2 | SeriesFamily::LpiEven | SeriesFamily::LpiOdd => {
                "Levin-u summed positive series"
            }
        }
    }
}

impl std::str::FromStr for SeriesFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        SeriesFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name() == upper)
            .ok_or_else(|| Error::Domain(format!("unknown series family `{s}`")))
    }
}

/// Memoized term magnitudes a_0 = 1 (or `first`), a_{n+1} = a_n ratio(n).
struct RatioTerms<R: Fn(f64) -> f64> {
    cache: RefCell<Vec<f64>>,
    ratio: R,
}

impl<R: Fn(f64) -> f64> RatioTerms<R> {
    fn new(first: f64, ratio: R) -> Self {
        RatioTerms {
            cache: RefCell::new(vec![first]),
            ratio,
        }
    }

    fn get(&self, n: usize) -> f64 {
        let mut cache = self.cache.borrow_mut();
        while cache.len() <= n {
            let k = cache.len() - 1;
            let next = cache[k] * (self.ratio)(k as f64);
            cache.push(next);
        }
        cache[n]
    }
}

fn require_p(p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::Domain(format!("series parameter requires p > 1, got {p}")));
    }
    Ok(p)
}

/// The alternating counterpart of the Gregory-Leibniz series:
/// sum_{n>=0} (2/p)_n / n! * (-1)^n / (pn + 1) = pi_{p*,p} / 4.
pub fn gl_series(p: f64, tol: f64) -> Result<EvalResult> {
    let p = require_p(p)?;
    let terms = RatioTerms::new(1.0, move |n| {
        (2.0 / p + n) * (p * n + 1.0) / ((n + 1.0) * (p * n + p + 1.0))
    });
    sum_alternating(
        |n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * terms.get(n)
        },
        tol,
        100_000,
    )
}

/// Catalan-type constant G_p = sum (2/p)_n / n! * (-1)^n / (pn+1)^2;
/// G_2 is Catalan's constant.
pub fn catalan_gp(p: f64, tol: f64) -> Result<EvalResult> {
    let p = require_p(p)?;
    let terms = RatioTerms::new(1.0, move |n| {
        let r = (p * n + 1.0) / (p * n + p + 1.0);
        (2.0 / p + n) / (n + 1.0) * r * r
    });
    sum_alternating(
        |n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * terms.get(n)
        },
        tol,
        100_000,
    )
}

/// The two integral representations of G_p:
/// 2^(-2/p) int_0^{pi_{2,p}/2} x / sin_{2,p} x dx  and
/// 2^(-2/p) int_0^1 K_{2,p}(k) dk.
///
/// The first integrand extends continuously by 1 at x = 0; the second has an
/// integrable logarithmic divergence at k = 1 (moduli indistinguishable from
/// 1 in binary64 are clamped, far below the quadrature tolerance).
pub fn catalan_gp_integral(p: f64) -> Result<(EvalResult, EvalResult)> {
    let p = require_p(p)?;
    let two_p = Params::new(2.0, p)?;
    let scale = 2.0f64.powf(-2.0 / p);

    let x_over_sin = QuadratureSpec::new(
        |x: f64| {
            if x < 1e-8 {
                1.0
            } else {
                x / two_p.sin(x)
            }
        },
        0.0,
        two_p.half_pi(),
    )
    .abs_tol(1e-11);
    let first = integrate(&x_over_sin)?;

    // Warm the inversion cache once so the per-modulus clones reuse it.
    let _ = two_p.sin(0.3 * two_p.half_pi());
    let k_integral = QuadratureSpec::new(
        |k: f64| {
            let k = k.min(1.0 - 1e-14);
            EllipticParams::new(two_p.clone(), k)
                .map(|e| e.k_complete().value)
                .unwrap_or(f64::NAN)
        },
        0.0,
        1.0,
    )
    .singular_right()
    .abs_tol(1e-9);
    let second = integrate(&k_integral)?;

    Ok((
        EvalResult::new(scale * first.value, scale * first.err_est).with_terms(first.terms_used),
        EvalResult::new(scale * second.value, scale * second.err_est)
            .with_terms(second.terms_used),
    ))
}

/// Companion positive-term constant
/// C_p = sum (1/2)_n (1/p)_n / ((1/2 + 1/p)_n n!) / (pn + 1).
pub fn cp_series(p: f64, tol: f64) -> Result<EvalResult> {
    let p = require_p(p)?;
    let terms = RatioTerms::new(1.0, move |n| {
        (0.5 + n) * (1.0 / p + n) * (p * n + 1.0)
            / ((0.5 + 1.0 / p + n) * (n + 1.0) * (p * n + p + 1.0))
    });
    sum_levin_u(|n| terms.get(n), tol, 100_000)
}

/// pi_{p*,p}/4 as the ratio G_p / C_p.
pub fn pi_ratio(p: f64) -> Result<EvalResult> {
    let g = catalan_gp(p, 1e-12)?;
    let c = cp_series(p, 1e-9)?;
    let value = g.value / c.value;
    let err = value.abs() * (g.err_est / g.value.abs() + c.err_est / c.value.abs());
    Ok(EvalResult::new(value, err).with_terms(g.terms_used + c.terms_used))
}

/// The four lemniscatic series:
/// LPI1  = sum (2n-1)!!/(2n)!! (-1)^n/(4n+1) = varpi / (2 sqrt 2),
/// LPI2  = sum (2n-1)!!/(2n)!!        1/(4n+1) = varpi / 2,
/// EVEN  = sum (4n-1)!!/(4n)!!        1/(8n+1) = (2 + sqrt 2) varpi / 8,
/// ODD   = sum (4n+1)!!/(4n+2)!!      1/(8n+5) = (2 - sqrt 2) varpi / 8.
pub fn lemniscate_series(variant: SeriesFamily) -> Result<EvalResult> {
    let tol = 1e-9;
    match variant {
        SeriesFamily::Lpi1 => gl_series(4.0, tol),
        SeriesFamily::Lpi2 => {
            let terms = RatioTerms::new(1.0, |n| {
                (0.5 + n) * (4.0 * n + 1.0) / ((n + 1.0) * (4.0 * n + 5.0))
            });
            sum_levin_u(|n| terms.get(n), tol, 100_000)
        }
        SeriesFamily::LpiEven => {
            let terms = RatioTerms::new(1.0, |n| {
                (2.0 * n + 0.5) * (2.0 * n + 1.5) * (8.0 * n + 1.0)
                    / ((2.0 * n + 1.0) * (2.0 * n + 2.0) * (8.0 * n + 9.0))
            });
            sum_levin_u(|n| terms.get(n), tol, 100_000)
        }
        SeriesFamily::LpiOdd => {
            let terms = RatioTerms::new(0.1, |n| {
                (2.0 * n + 1.5) * (2.0 * n + 2.5) * (8.0 * n + 5.0)
                    / ((2.0 * n + 2.0) * (2.0 * n + 3.0) * (8.0 * n + 13.0))
            });
            sum_levin_u(|n| terms.get(n), tol, 100_000)
        }
        other => Err(Error::Domain(format!(
            "{} is not a lemniscatic series",
            other.name()
        ))),
    }
}

/// First `count` signed raw terms of a series family (before acceleration),
/// mostly useful for inspecting the printed partial sums.
pub fn raw_terms(family: SeriesFamily, p: f64, count: usize) -> Result<Vec<f64>> {
    let signed = |alternating: bool, terms: &dyn Fn(usize) -> f64| -> Vec<f64> {
        (0..count)
            .map(|n| {
                let sign = if alternating && n % 2 == 1 { -1.0 } else { 1.0 };
                sign * terms(n)
            })
            .collect()
    };
    match family {
        SeriesFamily::GlPq => {
            let p = require_p(p)?;
            let t = RatioTerms::new(1.0, move |n| {
                (2.0 / p + n) * (p * n + 1.0) / ((n + 1.0) * (p * n + p + 1.0))
            });
            Ok(signed(true, &|n| t.get(n)))
        }
        SeriesFamily::GP => {
            let p = require_p(p)?;
            let t = RatioTerms::new(1.0, move |n| {
                let r = (p * n + 1.0) / (p * n + p + 1.0);
                (2.0 / p + n) / (n + 1.0) * r * r
            });
            Ok(signed(true, &|n| t.get(n)))
        }
        SeriesFamily::CP => {
            let p = require_p(p)?;
            let t = RatioTerms::new(1.0, move |n| {
                (0.5 + n) * (1.0 / p + n) * (p * n + 1.0)
                    / ((0.5 + 1.0 / p + n) * (n + 1.0) * (p * n + p + 1.0))
            });
            Ok(signed(false, &|n| t.get(n)))
        }
        SeriesFamily::Lpi1 => raw_terms(SeriesFamily::GlPq, 4.0, count),
        SeriesFamily::Lpi2 => {
            let t = RatioTerms::new(1.0, |n| {
                (0.5 + n) * (4.0 * n + 1.0) / ((n + 1.0) * (4.0 * n + 5.0))
            });
            Ok(signed(false, &|n| t.get(n)))
        }
        SeriesFamily::LpiEven => {
            let t = RatioTerms::new(1.0, |n| {
                (2.0 * n + 0.5) * (2.0 * n + 1.5) * (8.0 * n + 1.0)
                    / ((2.0 * n + 1.0) * (2.0 * n + 2.0) * (8.0 * n + 9.0))
            });
            Ok(signed(false, &|n| t.get(n)))
        }
        SeriesFamily::LpiOdd => {
            let t = RatioTerms::new(0.1, |n| {
                (2.0 * n + 1.5) * (2.0 * n + 2.5) * (8.0 * n + 5.0)
                    / ((2.0 * n + 2.0) * (2.0 * n + 3.0) * (8.0 * n + 13.0))
            });
            Ok(signed(false, &|n| t.get(n)))
        }
    }
}

/// Evaluate one family at one parameter (ignored by the lemniscatic ones).
pub fn evaluate(family: SeriesFamily, p: f64, tol: f64) -> Result<EvalResult> {
    match family {
        SeriesFamily::GlPq => gl_series(p, tol),
        SeriesFamily::GP => catalan_gp(p, tol),
        SeriesFamily::CP => cp_series(p, tol),
        lpi => lemniscate_series(lpi),
    }
}
