//! Accelerated summation of slowly convergent series.
//!
//! Alternating series go through the Chebyshev-polynomial acceleration of
//! Cohen, Rodriguez Villegas and Zagier, whose error shrinks like
//! (3 + sqrt 8)^(-n) for terms that are moments of a measure on [0, 1] --
//! exactly the shape of the hypergeometric-ratio terms summed here. Direct
//! summation of such terms (decay like n^(-s), s barely above 1) would need
//! astronomically many terms for 1e-10.
//!
//! Positive-term series with algebraic decay use the Levin u-transformation
//! driven by partial sums and remainder estimates w_n = (beta + n) a_n.

use crate::error::{Error, Result};
use crate::numerics::EvalResult;

/// Sum an alternating series given its signed terms.
///
/// `term(k)` must return the k-th signed term; magnitudes should decrease to
/// zero eventually, with strictly alternating signs. The result satisfies
/// |value - S| <= max(tol, err_est) and, for genuinely alternating input,
/// lies between any two consecutive partial sums of the raw series.
pub fn sum_alternating<F: Fn(usize) -> f64>(
    term: F,
    tol: f64,
    max_terms: usize,
) -> Result<EvalResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    // (3 + sqrt 8)^n must stay below f64::MAX.
    const N_CAP: usize = 380;
    const SCHEDULE: [usize; 11] = [8, 12, 18, 27, 40, 60, 90, 135, 200, 300, N_CAP];

    let mut magnitudes: Vec<f64> = Vec::new();
    let sign0 = if term(0) < 0.0 { -1.0 } else { 1.0 };

    let mut prev: Option<f64> = None;
    let mut best_delta = f64::INFINITY;

    for &n in SCHEDULE.iter() {
        let n = n.min(max_terms.max(2));
        while magnitudes.len() < n {
            let k = magnitudes.len();
            magnitudes.push(term(k).abs());
        }
        let value = sign0 * cvz_sum(&magnitudes[..n]);
        if let Some(p) = prev {
            let delta = (value - p).abs();
            best_delta = best_delta.min(delta);
            let floor = 8.0 * f64::EPSILON * value.abs().max(magnitudes[0]);
            if delta <= (0.5 * tol).max(floor) {
                return Ok(EvalResult::new(value, delta.max(floor)).with_terms(n));
            }
        }
        prev = Some(value);
        if n >= max_terms {
            break;
        }
    }
    Err(Error::NonConvergence {
        what: "alternating series acceleration",
        err_est: best_delta,
        tol,
    })
}

/// One pass of the Chebyshev acceleration over the first n magnitudes,
/// returning an approximation to sum_k (-1)^k a_k.
fn cvz_sum(a: &[f64]) -> f64 {
    let n = a.len();
    let mut d = (3.0 + 8.0f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for (k, &ak) in a.iter().enumerate() {
        let k = k as f64;
        c = b - c;
        s += c * ak;
        b *= (k + n as f64) * (k - n as f64) / ((k + 0.5) * (k + 1.0));
    }
    s / d
}

/// Levin u-transformation of the partial sums of `term`.
///
/// Intended for one-signed, smoothly decaying terms (hypergeometric ratios
/// with algebraic decay n^(-s), the regime where direct summation would need
/// ~tol^(-1/(s-1)) terms). The transform order grows until two consecutive
/// estimates agree within tol / 2 or rounding noise takes over, whichever
/// comes first; the noise case still returns when the best plateau beats tol.
pub fn sum_levin_u<F: Fn(usize) -> f64>(term: F, tol: f64, max_terms: usize) -> Result<EvalResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    const BETA: f64 = 1.0;
    // Past ~60 terms the recursion's cancellations exhaust double precision;
    // smooth algebraic series converge by order ~25.
    const CAP: usize = 64;
    let cap = max_terms.clamp(3, CAP);

    let mut terms: Vec<f64> = Vec::with_capacity(cap);
    let mut sums: Vec<f64> = Vec::with_capacity(cap);
    let mut acc = 0.0;
    for n in 0..cap {
        let a_n = term(n);
        acc += a_n;
        if a_n == 0.0 {
            // Terms vanished identically; the partial sum is exact.
            return Ok(EvalResult::new(acc, f64::EPSILON * acc.abs()).with_terms(n + 1));
        }
        terms.push(a_n);
        sums.push(acc);
    }

    let mut prev_val = f64::NAN;
    let mut best: Option<(f64, f64, usize)> = None;
    let mut degrading = 0u32;
    for m in (6..=cap).step_by(2) {
        let Some(val) = levin_u_estimate(&sums[..m], &terms[..m], BETA) else {
            continue;
        };
        let delta = (val - prev_val).abs();
        prev_val = val;
        if delta.is_nan() {
            continue;
        }
        let floor = 8.0 * f64::EPSILON * val.abs();
        let err = delta.max(floor);
        if delta <= (0.5 * tol).max(floor) {
            return Ok(EvalResult::new(val, err).with_terms(m));
        }
        match best {
            Some((e, _, _)) if err >= e => {
                // Rounding noise grows once the transform order passes its
                // sweet spot; two consecutive regressions mean it's over.
                degrading += 1;
                if degrading >= 2 {
                    break;
                }
            }
            _ => {
                best = Some((err, val, m));
                degrading = 0;
            }
        }
    }
    if let Some((err, val, m)) = best {
        if err <= tol {
            return Ok(EvalResult::new(val, err).with_terms(m));
        }
    }
    Err(Error::NonConvergence {
        what: "Levin u-transformation",
        err_est: best.map_or(f64::INFINITY, |(e, _, _)| e),
        tol,
    })
}

/// Highest-order Levin u estimate from the first m partial sums, using the
/// remainder model w_n = (beta + n) a_n and the standard recursion
/// N_{k+1}^{(n)} = N_k^{(n+1)} - c_{k,n} N_k^{(n)} with
/// c_{k,n} = (beta+n)(beta+n+k)^{k-1} / (beta+n+k+1)^k.
fn levin_u_estimate(sums: &[f64], terms: &[f64], beta: f64) -> Option<f64> {
    let m = sums.len();
    let mut num: Vec<f64> = (0..m)
        .map(|n| sums[n] / ((beta + n as f64) * terms[n]))
        .collect();
    let mut den: Vec<f64> = (0..m)
        .map(|n| 1.0 / ((beta + n as f64) * terms[n]))
        .collect();
    for k in 0..m - 1 {
        for n in 0..m - 1 - k {
            let bn = beta + n as f64;
            let c = bn * (bn + k as f64).powi(k as i32 - 1) / (bn + k as f64 + 1.0).powi(k as i32);
            num[n] = num[n + 1] - c * num[n];
            den[n] = den[n + 1] - c * den[n];
        }
    }
    if den[0].abs() < 1e-300 || !num[0].is_finite() || !den[0].is_finite() {
        return None;
    }
    Some(num[0] / den[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gregory_leibniz() {
        let r = sum_alternating(|n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s / (2.0 * n as f64 + 1.0)
        }, 1e-12, 10_000)
        .unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn catalan_constant() {
        // G = 0.9159655941772190... (sum of (-1)^n / (2n+1)^2).
        let r = sum_alternating(|n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s / (2.0 * n as f64 + 1.0).powi(2)
        }, 1e-12, 10_000)
        .unwrap();
        assert!((r.value - 0.915_965_594_177_219_0).abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn alternating_result_sits_between_partial_sums() {
        let term = |n: usize| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s / (2.0 * n as f64 + 1.0)
        };
        let v = sum_alternating(term, 1e-12, 10_000).unwrap().value;
        let mut s = 0.0;
        for n in 0..64 {
            let s_next = s + term(n);
            let (lo, hi) = if s < s_next { (s, s_next) } else { (s_next, s) };
            if n > 0 {
                assert!(v >= lo && v <= hi, "violated at n = {n}");
            }
            s = s_next;
        }
    }

    #[test]
    fn alternating_ln2() {
        let r = sum_alternating(|n| {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            s / (n as f64 + 1.0)
        }, 1e-13, 10_000)
        .unwrap();
        assert!((r.value - 2.0f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn levin_u_zeta_two() {
        // The transform's rounding floor sits around 5e-11 here; ask for a
        // tolerance it can certify.
        let r = sum_levin_u(|n| 1.0 / ((n + 1) as f64).powi(2), 1e-9, 400).unwrap();
        assert!(
            (r.value - PI * PI / 6.0).abs() < 1e-9,
            "got {} with {} terms",
            r.value,
            r.terms_used
        );
    }

    #[test]
    fn levin_u_three_halves_decay() {
        // zeta(3/2) = 2.612375348685488343... -- same n^(-3/2) decay as the
        // positive lemniscatic series.
        let r = sum_levin_u(|n| 1.0 / ((n + 1) as f64).powf(1.5), 1e-9, 2000).unwrap();
        assert!(
            (r.value - 2.612_375_348_685_488_3).abs() < 1e-8,
            "got {} with {} terms",
            r.value,
            r.terms_used
        );
    }

    #[test]
    fn levin_u_exact_termination() {
        // Geometric series terminating below underflow: partial sums converge
        // long before the cap; the accelerated value must match 2.
        let r = sum_levin_u(|n| 0.5f64.powi(n as i32), 1e-13, 10_000).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn alternating_nonconvergence_is_reported() {
        // Constant magnitudes violate the contract badly enough to stall.
        let r = sum_alternating(|n| if n % 2 == 0 { 1.0 } else { -1.0 }, 1e-14, 6);
        assert!(r.is_err());
    }
}
