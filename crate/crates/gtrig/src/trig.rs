//! The two-parameter generalized trigonometric functions.
//!
//! For p, q in (1, inf), sin_{p,q} is the inverse of
//! x -> int_0^x (1 - t^q)^(-1/p) dt on [0, 1], reflected about its
//! half-period and continued to an odd 2 pi_{p,q}-periodic C^1 function on
//! the whole line. cos_{p,q} is its derivative, and the pair satisfies
//! |cos|^p + |sin|^q = 1. At (p, q) = (2, 2) everything degenerates to the
//! classical sine, cosine and pi; at (2, 4) the sine is the lemniscatic sl.
//!
//! The inverse sine is evaluated through the regularized incomplete beta
//! function (which absorbs the endpoint singularity analytically); the
//! forward functions invert it with a safeguarded Newton seeded by a cached
//! Chebyshev fit of the fundamental branch.

use crate::error::{Error, Result};
use crate::numerics::gamma::{beta, inc_beta_reg, ln_beta};
use crate::numerics::quadrature::tanh_sinh_offset;
use crate::numerics::EvalResult;
use once_cell::sync::OnceCell;

/// Relative width of the rejection band around the poles of tau_{p,q} and
/// of (cos_{p,q})' for p > 2.
const POLE_GUARD_REL: f64 = 1e-8;

/// Exponent pair (p, q) with its derived conjugate p* = p/(p-1), the
/// generalized half-period, and a lazily built inversion seed.
///
/// Construction validates p, q in (1, inf) and precomputes
/// pi_{p,q} = (2/q) B(1/p*, 1/q). Immutable afterwards; cheap to share
/// across threads.
#[derive(Debug, Clone)]
pub struct Params {
    p: f64,
    q: f64,
    p_star: f64,
    pi_pq: f64,
    inv_fit: OnceCell<ChebFit>,
}

impl Params {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && p > 1.0 && q > 1.0) {
            return Err(Error::Domain(format!(
                "generalized trigonometric parameters need p, q in (1, inf), got ({p}, {q})"
            )));
        }
        let p_star = p / (p - 1.0);
        let pi_pq = (2.0 / q) * beta(1.0 / p_star, 1.0 / q)?;
        Ok(Params {
            p,
            q,
            p_star,
            pi_pq,
            inv_fit: OnceCell::new(),
        })
    }

    /// The conjugate pair (p*, p) that the multiple-angle formulas couple to
    /// (2, p).
    pub fn conjugate_pair(p: f64) -> Result<Self> {
        let p_star = p / (p - 1.0);
        Params::new(p_star, p)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    /// The generalized pi: pi_{p,q} = 2 arcsin_{p,q}(1) = (2/q) B(1/p*, 1/q).
    pub fn pi(&self) -> f64 {
        self.pi_pq
    }

    pub fn half_pi(&self) -> f64 {
        0.5 * self.pi_pq
    }

    /// arcsin_{p,q}(x) = int_0^x (1 - t^q)^(-1/p) dt for x in [0, 1],
    /// as (pi_{p,q}/2) I_{x^q}(1/q, 1/p*).
    pub fn arcsin(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!(
                "arcsin_pq requires x in [0, 1], got {x}"
            )));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        if x == 1.0 {
            return Ok(self.half_pi());
        }
        let (xq, omxq) = stable_pow_pair(x, self.q);
        let i = inc_beta_reg(1.0 / self.q, 1.0 / self.p_star, xq, omxq)?;
        Ok(i * self.half_pi())
    }

    /// sin_{p,q}(x) on the whole real line.
    pub fn sin(&self, x: f64) -> f64 {
        let r = self.reduce(x);
        let (s, _) = self.sin_fundamental(r.y);
        r.sin_sign * s
    }

    /// cos_{p,q}(x) = (sin_{p,q})'(x): magnitude (1 - |sin|^q)^(1/p), sign
    /// that of the slope of the extended sine.
    pub fn cos(&self, x: f64) -> f64 {
        self.sin_cos(x).1
    }

    /// Both functions from one argument reduction.
    pub fn sin_cos(&self, x: f64) -> (f64, f64) {
        let r = self.reduce(x);
        let (s, omsq) = self.sin_fundamental(r.y);
        let c = if omsq == 0.0 {
            0.0
        } else {
            omsq.powf(1.0 / self.p)
        };
        (r.sin_sign * s, r.cos_sign * c)
    }

    /// Generalized tangent tau_{p,q} = sin / (|cos|^(p/q - 1) cos).
    ///
    /// The cosine power p/q is pinned by three independent anchors: it makes
    /// tau_{p*,p}(pi_{p*,p}/4) = 1, it gives the inverse the closed integral
    /// form int_0^x (1 + t^p)^(-2/p) dt, and it degenerates to the classical
    /// tangent at p = q = 2.
    ///
    /// Poles sit at odd multiples of pi_{p,q}/2; arguments inside the guard
    /// band around them are rejected instead of returning huge values.
    pub fn tau(&self, x: f64) -> Result<f64> {
        self.check_pole_guard(x)?;
        let (s, c) = self.sin_cos(x);
        Ok(s / odd_pow(c, self.p / self.q))
    }

    /// Analytic derivative of cos_{p,q}:
    /// (cos)' = -(q/p) |sin|^(q-2) sin |cos|^(2-p).
    ///
    /// For p > 2 this blows up at the zeros of cos, so those arguments are
    /// guarded like tau's poles.
    pub fn d_cos(&self, x: f64) -> Result<f64> {
        if self.p > 2.0 {
            self.check_pole_guard(x)?;
        }
        let (s, c) = self.sin_cos(x);
        if s == 0.0 {
            return Ok(0.0);
        }
        let sin_part = s.abs().powf(self.q - 2.0) * s;
        let cos_part = if self.p == 2.0 {
            1.0
        } else {
            c.abs().powf(2.0 - self.p)
        };
        Ok(-(self.q / self.p) * sin_part * cos_part)
    }

    fn check_pole_guard(&self, x: f64) -> Result<()> {
        let guard = POLE_GUARD_REL * self.pi_pq;
        let r = (x - self.half_pi()).rem_euclid(self.pi_pq);
        let dist = r.min(self.pi_pq - r);
        if dist < guard {
            return Err(Error::Pole { x, guard });
        }
        Ok(())
    }

    /// Map x to the fundamental quadrant [0, pi_{p,q}/2] plus the signs of
    /// sine and cosine there.
    fn reduce(&self, x: f64) -> Reduced {
        let two_pi = 2.0 * self.pi_pq;
        let r = x.rem_euclid(two_pi);
        let half = self.half_pi();
        let (y, sin_sign, cos_sign) = if r <= half {
            (r, 1.0, 1.0)
        } else if r <= self.pi_pq {
            (self.pi_pq - r, 1.0, -1.0)
        } else if r <= self.pi_pq + half {
            (r - self.pi_pq, -1.0, -1.0)
        } else {
            (two_pi - r, -1.0, 1.0)
        };
        Reduced {
            y: y.clamp(0.0, half),
            sin_sign,
            cos_sign,
        }
    }

    /// |sin_{p,q} x| together with 1 - |sin|^q (which is |cos|^p), the
    /// complement evaluated without cancellation near the extrema.
    pub fn sin_abs_omsq(&self, x: f64) -> (f64, f64) {
        let r = self.reduce(x);
        self.sin_fundamental(r.y)
    }

    /// Solve arcsin(s) = y on the fundamental branch, returning s together
    /// with 1 - s^q evaluated without cancellation.
    ///
    /// Near the top of the branch s loses the information in 1 - s, so the
    /// first solve is refined by a second Newton iteration in the complement
    /// m = 1 - s^q, which stays accurate down to the underflow limit.
    fn sin_fundamental(&self, y: f64) -> (f64, f64) {
        if y <= 0.0 {
            return (0.0, 1.0);
        }
        if y >= self.half_pi() {
            return (1.0, 0.0);
        }
        let guess = self.fit().eval(y).clamp(1e-6, 1.0 - 1e-12);
        let (s, omsq) = self.invert_arcsin(y, guess);
        if omsq < 0.05 {
            self.invert_complement(self.half_pi() - y, omsq)
        } else {
            (s, omsq)
        }
    }

    /// Solve I_m(1/p*, 1/q) = u / (pi_{p,q}/2) for m = 1 - s^q, given the
    /// arc distance u from the top of the branch.
    fn invert_complement(&self, u: f64, guess: f64) -> (f64, f64) {
        let a = 1.0 / self.p_star;
        let b = 1.0 / self.q;
        let target = u / self.half_pi();
        let Ok(ln_b) = ln_beta(a, b) else {
            return (f64::NAN, f64::NAN);
        };
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut m = guess.clamp(1e-300, 1.0 - 1e-16);
        for _ in 0..80 {
            let val = inc_beta_reg(a, b, m, 1.0 - m).unwrap_or(f64::NAN);
            if !val.is_finite() {
                m = 0.5 * (lo + hi);
                continue;
            }
            let g = val - target;
            if g > 0.0 {
                hi = m;
            } else {
                lo = m;
            }
            if g.abs() <= 4.0 * f64::EPSILON * target {
                break;
            }
            // dI/dm = m^(a-1) (1-m)^(b-1) / B(a, b).
            let deriv = ((a - 1.0) * m.ln() + (b - 1.0) * (-m).ln_1p() - ln_b).exp();
            let mut m_new = m - g / deriv;
            if !(m_new > lo && m_new < hi) {
                m_new = 0.5 * (lo + hi);
            }
            if m_new == m {
                break;
            }
            m = m_new;
        }
        // s = (1 - m)^(1/q) keeps full relative precision for small m.
        let s = ((-m).ln_1p() / self.q).exp();
        (s, m)
    }

    fn invert_arcsin(&self, y: f64, guess: f64) -> (f64, f64) {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut s = guess;
        let tol_y = 4.0 * f64::EPSILON * self.half_pi();
        let mut pair = (s, 1.0);
        for _ in 0..80 {
            let (xq, omsq) = stable_pow_pair(s, self.q);
            pair = (s, omsq);
            let val = inc_beta_reg(1.0 / self.q, 1.0 / self.p_star, xq, omsq)
                .map(|i| i * self.half_pi())
                .unwrap_or(f64::NAN);
            if !val.is_finite() {
                s = 0.5 * (lo + hi);
                continue;
            }
            let g = val - y;
            if g > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            if g.abs() <= tol_y {
                break;
            }
            // Newton step with ds/dy = cos = (1 - s^q)^(1/p).
            let mut s_new = s - g * omsq.powf(1.0 / self.p);
            if !(s_new > lo && s_new < hi) {
                s_new = 0.5 * (lo + hi);
            }
            if s_new == s {
                break;
            }
            s = s_new;
        }
        pair
    }

    fn fit(&self) -> &ChebFit {
        self.inv_fit.get_or_init(|| {
            const N: usize = 64;
            let half = self.half_pi();
            let mut values = [0.0f64; N];
            for (j, v) in values.iter_mut().enumerate() {
                let u = (std::f64::consts::PI * (j as f64 + 0.5) / N as f64).cos();
                let y = 0.5 * (u + 1.0) * half;
                // Cold start: the identity map is a serviceable seed.
                *v = self.invert_arcsin(y, (y / half).clamp(1e-6, 1.0 - 1e-12)).0;
            }
            let mut coeffs = vec![0.0f64; N];
            for (k, c) in coeffs.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, v) in values.iter().enumerate() {
                    acc += v
                        * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / N as f64).cos();
                }
                *c = 2.0 * acc / N as f64;
            }
            ChebFit {
                coeffs,
                half_pi: half,
            }
        })
    }
}

struct Reduced {
    y: f64,
    sin_sign: f64,
    cos_sign: f64,
}

/// Chebyshev interpolant of the fundamental sine branch, used only as a
/// Newton seed.
#[derive(Debug, Clone)]
struct ChebFit {
    coeffs: Vec<f64>,
    half_pi: f64,
}

impl ChebFit {
    fn eval(&self, y: f64) -> f64 {
        let u = (2.0 * y / self.half_pi - 1.0).clamp(-1.0, 1.0);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + 0.5 * self.coeffs[0]
    }
}

/// (x^q, 1 - x^q) for x in [0, 1], with the complement formed via expm1 when
/// x^q is close to one.
fn stable_pow_pair(x: f64, q: f64) -> (f64, f64) {
    if x <= 0.7 {
        let t = x.powf(q);
        (t, 1.0 - t)
    } else {
        let om = -(q * x.ln()).exp_m1();
        (1.0 - om, om)
    }
}

/// sign(v) |v|^r, with the 0^r = 0 convention for r > 0.
pub fn odd_pow(v: f64, r: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(r)
    }
}

/// pi_{p,q} evaluated by tanh-sinh quadrature of its defining integral
/// 2 int_0^1 (1 - t^q)^(-1/p) dt, as an independent cross-check of the
/// beta-function route used by [`Params::pi`].
pub fn pi_pq_quadrature(p: f64, q: f64) -> Result<EvalResult> {
    if !(p.is_finite() && q.is_finite() && p > 1.0 && q > 1.0) {
        return Err(Error::Domain(format!(
            "pi_pq requires p, q in (1, inf), got ({p}, {q})"
        )));
    }
    let r = tanh_sinh_offset(
        |t, _dl, dr| {
            let omtq = if t > 0.7 {
                -(q * (-dr).ln_1p()).exp_m1()
            } else {
                1.0 - t.powf(q)
            };
            omtq.powf(-1.0 / p)
        },
        0.0,
        1.0,
        1e-13,
    )?;
    Ok(EvalResult::new(2.0 * r.value, 2.0 * r.err_est).with_terms(r.terms_used))
}

/// Inverse of tau_{p*,p} on [0, pi_{p*,p}/2):
/// arctau_star(p, x) = int_0^x (1 + t^p)^(-2/p) dt.
///
/// Evaluated in closed form through the incomplete beta function with
/// parameters (1/p, 1/p); x = 1 lands exactly on the quarter period.
pub fn arctau_star(p: f64, x: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::Domain(format!("arctau_star requires p > 1, got {p}")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("arctau_star requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let a = 1.0 / p;
    let xp = x.powf(p);
    // u = 1/(1 + t^p) maps the integral to (1/p) [B(a,a) - B_{u0}(a,a)].
    let (u0, cu0) = if xp.is_infinite() {
        (0.0, 1.0)
    } else {
        (1.0 / (1.0 + xp), xp / (1.0 + xp))
    };
    let tail = inc_beta_reg(a, a, u0, cu0)?;
    Ok(beta(a, a)? * (1.0 - tail) / p)
}
