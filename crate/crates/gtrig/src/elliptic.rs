//! Generalized amplitude, complete integral and Jacobi-type elliptic sine.
//!
//! For k in [0, 1) the inverse amplitude is
//! am_{p,q}^{-1}(x, k) = int_0^x (1 - k^q |sin_{p,q} t|^q)^(-1/p*) dt,
//! K_{p,q}(k) its value at the half period, am its inverse on all of R, and
//! sn_{p,q}(x, k) = sin_{p,q}(am_{p,q}(x, k)). The k -> 0 limit collapses to
//! the plain trig layer and k -> 1 degenerates towards tanh_q, the inverse
//! of x -> int_0^x dt / (1 - |t|^q).

use crate::error::{Error, Result};
use crate::numerics::quadrature::{tanh_sinh, tanh_sinh_lenient};
use crate::numerics::root::find_root_newton;
use crate::numerics::EvalResult;
use crate::trig::Params;
use once_cell::sync::OnceCell;

/// Moduli at or above 1 - NEAR_SINGULAR_GAP get their results flagged: the
/// quadrature still converges, but K grows like a logarithm and downstream
/// consumers should not trust tight error estimates there.
const NEAR_SINGULAR_GAP: f64 = 1e-6;

const QUAD_TOL: f64 = 1e-13;

/// Exponent pair plus modulus k in [0, 1).
#[derive(Debug, Clone)]
pub struct EllipticParams {
    params: Params,
    k: f64,
    /// k^q and its complement 1 - k^q, the latter formed via expm1 so the
    /// integrand stays accurate as k -> 1.
    kq: f64,
    omkq: f64,
    complete: OnceCell<EvalResult>,
}

impl EllipticParams {
    pub fn new(params: Params, k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain(format!(
                "elliptic modulus must satisfy 0 <= k < 1, got {k}"
            )));
        }
        let (kq, omkq) = if k == 0.0 {
            (0.0, 1.0)
        } else {
            let omkq = -(params.q() * k.ln()).exp_m1();
            (1.0 - omkq, omkq)
        };
        Ok(EllipticParams {
            params,
            k,
            kq,
            omkq,
            complete: OnceCell::new(),
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn is_near_singular(&self) -> bool {
        self.k >= 1.0 - NEAR_SINGULAR_GAP
    }

    /// (1 - k^q |sin_{p,q} t|^q)^(-1/p*), the derivative of am^{-1}.
    fn integrand(&self, t: f64) -> f64 {
        self.one_minus_m(t).powf(-1.0 / self.params.p_star())
    }

    /// 1 - k^q |sin t|^q = (1 - k^q) + k^q (1 - |sin t|^q): both terms are
    /// nonnegative, so the peak near the half period keeps full precision
    /// even for moduli within one ulp of 1.
    fn one_minus_m(&self, t: f64) -> f64 {
        if self.k == 0.0 {
            return 1.0;
        }
        let (_, omsq) = self.params.sin_abs_omsq(t);
        self.omkq + self.kq * omsq
    }

    /// Inverse amplitude on the whole line: odd, strictly increasing, with
    /// am^{-1}(x + pi_{p,q}) = am^{-1}(x) + 2 K.
    pub fn am_inv(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        if x < 0.0 {
            return -self.am_inv(-x);
        }
        if self.k == 0.0 {
            return x;
        }
        let pi = self.params.pi();
        let half = 0.5 * pi;
        let two_k = 2.0 * self.k_complete().value;
        let m = (x / pi).floor();
        let r = x - m * pi;
        let base = if r <= half {
            self.am_inv_base(r)
        } else {
            two_k - self.am_inv_base(pi - r)
        };
        m * two_k + base
    }

    /// The defining integral over [0, r] for r in the fundamental quadrant.
    fn am_inv_base(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        tanh_sinh_lenient(|t| self.integrand(t), 0.0, r, QUAD_TOL).value
    }

    /// Complete integral K_{p,q}(k) = am^{-1}(pi_{p,q}/2, k), cached.
    pub fn k_complete(&self) -> EvalResult {
        *self.complete.get_or_init(|| {
            if self.k == 0.0 {
                return EvalResult::new(self.params.half_pi(), 0.0);
            }
            let r = tanh_sinh_lenient(
                |t| self.integrand(t),
                0.0,
                self.params.half_pi(),
                QUAD_TOL,
            );
            r.with_near_singular(self.is_near_singular())
        })
    }

    /// Amplitude: inverse of am_inv, extended by am(x + 2K) = am(x) + pi_{p,q}
    /// and oddness.
    pub fn am(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        if x < 0.0 {
            return -self.am(-x);
        }
        if self.k == 0.0 {
            return x;
        }
        let pi = self.params.pi();
        let big_k = self.k_complete().value;
        let two_k = 2.0 * big_k;
        let m = (x / two_k).floor();
        let r = x - m * two_k;
        let base = if r <= big_k {
            self.am_base(r, big_k)
        } else {
            pi - self.am_base(two_k - r, big_k)
        };
        m * pi + base
    }

    /// Solve am_inv(theta) = u for theta in [0, pi/2] by safeguarded Newton;
    /// the derivative is the integrand itself.
    fn am_base(&self, u: f64, big_k: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let half = self.params.half_pi();
        if u >= big_k {
            return half;
        }
        let g = |theta: f64| (self.am_inv_base(theta) - u, self.integrand(theta));
        find_root_newton(g, 0.0, half, 1e-13).unwrap_or(u * half / big_k)
    }

    /// Generalized Jacobi elliptic sine sn_{p,q}(x, k): odd, |sn| <= 1,
    /// 4K-periodic, equal to sin_{p,q} at k = 0.
    pub fn sn(&self, x: f64) -> f64 {
        self.params.sin(self.am(x))
    }
}

/// Inverse of tanh_q: int_0^x dt / (1 - |t|^q), for |x| < 1.
///
/// Small arguments are summed as the termwise-integrated geometric series;
/// larger ones split off the logarithmic part of the pole at t = 1 and
/// integrate the smooth remainder.
pub fn artanh_q(q: f64, x: f64) -> Result<f64> {
    if !(q.is_finite() && q > 1.0) {
        return Err(Error::Domain(format!("artanh_q requires q > 1, got {q}")));
    }
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "artanh_q requires |x| < 1, got {x}"
        )));
    }
    let sign = x.signum();
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(0.0);
    }
    if ax <= 0.5 {
        // sum_{n>=0} ax^{qn+1} / (qn+1), ratio ax^q < 1/2.
        let t = ax.powf(q);
        let mut term = ax;
        let mut qn1 = 1.0;
        let mut sum = ax;
        for _ in 0..120 {
            term *= t * qn1;
            qn1 += q;
            term /= qn1;
            sum += term;
            if term < f64::EPSILON * sum {
                break;
            }
        }
        return Ok(sign * sum);
    }
    // 1/(1 - t^q) = 1/(q(1-t)) + g(t) with g smooth up to t = 1.
    let g = |t: f64| {
        let omt = 1.0 - t;
        let omtq = if t > 0.7 {
            -(q * t.ln()).exp_m1()
        } else {
            1.0 - t.powf(q)
        };
        (q * omt - omtq) / (q * omt * omtq)
    };
    let smooth = tanh_sinh(g, 0.0, ax, 1e-13)?;
    Ok(sign * (-(-ax).ln_1p() / q + smooth.value))
}

/// tanh_q: odd, strictly increasing bijection R -> (-1, 1); inverse of
/// artanh_q. Arguments beyond the resolvable range return exactly 1 in
/// magnitude (the true value differs from 1 by less than one ulp there).
pub fn tanh_q(q: f64, x: f64) -> Result<f64> {
    if !(q.is_finite() && q > 1.0) {
        return Err(Error::Domain(format!("tanh_q requires q > 1, got {q}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let sign = x.signum();
    let ax = x.abs();
    let y_hi = 1.0 - 1e-16;
    let top = artanh_q(q, y_hi)?;
    if ax >= top {
        return Ok(sign);
    }
    let g = |y: f64| {
        let f = artanh_q(q, y).unwrap_or(f64::INFINITY) - ax;
        let df = 1.0 / (1.0 - y.powf(q)).max(1e-300);
        (f, df)
    };
    let y = find_root_newton(g, 0.0, y_hi, 1e-15)?;
    Ok(sign * y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(p: f64, q: f64, k: f64) -> EllipticParams {
        EllipticParams::new(Params::new(p, q).unwrap(), k).unwrap()
    }

    #[test]
    fn modulus_domain() {
        let params = Params::new(2.0, 2.0).unwrap();
        assert!(EllipticParams::new(params.clone(), 1.0).is_err());
        assert!(EllipticParams::new(params.clone(), -0.1).is_err());
        assert!(EllipticParams::new(params, 0.999_999_9).is_ok());
    }

    #[test]
    fn zero_modulus_collapses() {
        let e = ep(2.5, 1.8, 0.0);
        for &x in &[0.0, 0.3, 1.7, -2.2] {
            assert_eq!(e.am_inv(x), x);
            assert_eq!(e.am(x), x);
            assert!((e.sn(x) - e.params().sin(x)).abs() < 1e-15);
        }
        let k0 = e.k_complete();
        assert_eq!(k0.value, e.params().half_pi());
    }

    #[test]
    fn k_increases_with_modulus_and_diverges() {
        let p = Params::new(3.0, 3.0).unwrap();
        let k0 = p.half_pi();
        let k_half = EllipticParams::new(p.clone(), 0.5).unwrap().k_complete();
        let k_nine = EllipticParams::new(p.clone(), 0.9).unwrap().k_complete();
        let k_near = EllipticParams::new(p, 0.999).unwrap().k_complete();
        assert!(k_half.value > k0);
        assert!(k_nine.value > k_half.value);
        assert!(k_near.value > k_nine.value);
    }

    #[test]
    fn near_singular_flag() {
        assert!(ep(2.0, 2.0, 0.999_999_5).k_complete().near_singular);
        assert!(!ep(2.0, 2.0, 0.9).k_complete().near_singular);
    }

    #[test]
    fn am_inverts_am_inv() {
        for &(p, q, k) in &[(2.0, 2.0, 0.3), (3.0, 1.5, 0.9), (1.5, 4.0, 0.6)] {
            let e = ep(p, q, k);
            let two_pi = 2.0 * e.params().pi();
            for i in 0..17 {
                let theta = -two_pi + i as f64 * (2.0 * two_pi) / 16.0;
                let round = e.am(e.am_inv(theta));
                assert!(
                    (round - theta).abs() < 1e-10,
                    "(p,q,k)=({p},{q},{k}) theta={theta}: {round}"
                );
            }
        }
    }

    #[test]
    fn am_quarter_period_anchor() {
        let e = ep(2.0, 4.0, 0.7);
        let big_k = e.k_complete().value;
        assert!((e.am(big_k) - e.params().half_pi()).abs() < 1e-11);
        assert!((e.am_inv(e.params().half_pi()) - big_k).abs() < 1e-12);
    }

    #[test]
    fn sn_periodicity_and_bound() {
        let e = ep(2.5, 2.5, 0.8);
        let four_k = 4.0 * e.k_complete().value;
        for i in 0..13 {
            let x = -5.0 + i as f64 * 0.91;
            let v = e.sn(x);
            assert!(v.abs() <= 1.0 + 1e-12);
            assert!((e.sn(x + four_k) - v).abs() < 1e-10, "x = {x}");
            assert!((e.sn(-x) + v).abs() < 1e-10);
        }
    }

    #[test]
    fn sn_tends_to_tanh_q_as_k_grows() {
        // |sn(x, k) - tanh_q x| must shrink monotonically as k -> 1.
        let params = Params::new(3.0, 3.0).unwrap();
        let x = 0.8;
        let t = tanh_q(3.0, x).unwrap();
        let mut prev = f64::INFINITY;
        for &k in &[0.9, 0.99, 0.999] {
            let e = EllipticParams::new(params.clone(), k).unwrap();
            let gap = (e.sn(x) - t).abs();
            assert!(gap < prev, "k = {k}: gap {gap} vs prev {prev}");
            prev = gap;
        }
    }

    #[test]
    fn artanh_classical() {
        for &x in &[0.0, 0.3, 0.5, 0.9, -0.77] {
            let got = artanh_q(2.0, x).unwrap();
            assert!((got - x.atanh()).abs() < 1e-13, "x = {x}: {got}");
        }
        assert!(artanh_q(2.0, 1.0).is_err());
        assert!(artanh_q(0.5, 0.1).is_err());
    }

    #[test]
    fn artanh_series_quadrature_seam() {
        // The two evaluation branches must agree where they meet.
        for &q in &[1.5, 2.0, 4.0, 7.0] {
            let below = artanh_q(q, 0.5).unwrap();
            let above = artanh_q(q, 0.5 + 1e-12).unwrap();
            assert!((above - below).abs() < 1e-11, "q = {q}");
        }
    }

    #[test]
    fn tanh_q_round_trip_and_saturation() {
        for &q in &[1.5, 2.0, 4.0] {
            for &x in &[0.1, 0.9, 2.3, -1.4] {
                let y = tanh_q(q, x).unwrap();
                let back = artanh_q(q, y).unwrap();
                assert!((back - x).abs() < 1e-11, "q={q} x={x}: {back}");
            }
            assert_eq!(tanh_q(q, 1e6).unwrap(), 1.0);
            assert!((tanh_q(2.0, 0.5).unwrap() - 0.5f64.tanh()).abs() < 1e-13);
        }
    }
}
