//! Closed-form and numerical solutions of the p-Laplacian pendulum
//!
//!   -(|theta'|^(p-2) theta')' = lambda^p |sin_{2,p} theta|^(p-2) sin_{2,p} theta,
//!   theta(0) = 0, theta'(0) = omega_0.
//!
//! The regime parameter k = omega_0 / (2^(2/p) lambda) separates oscillation
//! (k < 1, amplitude 2^(2/p) arcsin_{p*,p} k and period 4 K_{p,p}(k)/lambda),
//! the separatrix (k = 1, theta -> pi_{2,p} monotonically) and rotation
//! (k > 1, unbounded monotone growth).

use crate::elliptic::{tanh_q, EllipticParams};
use crate::error::{Error, Result};
use crate::numerics::ode::Dopri5;
use crate::trig::{odd_pow, Params};
use serde::Serialize;

const SEPARATRIX_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Oscillatory,
    Separatrix,
    Rotating,
}

/// Pendulum parameters with the derived regime constant k.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PendulumConfig {
    pub p: f64,
    pub lambda: f64,
    pub omega0: f64,
    pub k: f64,
}

impl PendulumConfig {
    pub fn new(p: f64, lambda: f64, omega0: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::Domain(format!("pendulum requires p > 1, got {p}")));
        }
        if !(lambda > 0.0 && omega0 > 0.0) {
            return Err(Error::Domain(format!(
                "pendulum requires lambda, omega0 > 0, got ({lambda}, {omega0})"
            )));
        }
        let k = omega0 / (2.0f64.powf(2.0 / p) * lambda);
        Ok(PendulumConfig {
            p,
            lambda,
            omega0,
            k,
        })
    }

    pub fn regime(&self) -> Regime {
        if (self.k - 1.0).abs() <= SEPARATRIX_BAND {
            Regime::Separatrix
        } else if self.k < 1.0 {
            Regime::Oscillatory
        } else {
            Regime::Rotating
        }
    }
}

enum Branch {
    /// k < 1: theta = 2^(2/p) arcsin_{p*,p}(k sn_{p,p}(lambda t, k)).
    Oscillatory { sym: EllipticParams },
    /// k = 1: theta = 2^(2/p) arcsin_{p*,p}(tanh_p(lambda t)).
    Separatrix,
    /// k > 1: theta = 2^(2/p) am_{p*,p}(k lambda t, 1/k).
    Rotating { conj_am: EllipticParams },
}

/// Evaluator for the closed-form solution; builds its parameter caches once.
pub struct ClosedForm {
    cfg: PendulumConfig,
    scale: f64,
    conj: Params,
    branch: Branch,
}

impl ClosedForm {
    pub fn new(cfg: PendulumConfig) -> Result<Self> {
        let scale = 2.0f64.powf(2.0 / cfg.p);
        let conj = Params::conjugate_pair(cfg.p)?;
        let branch = match cfg.regime() {
            Regime::Oscillatory => Branch::Oscillatory {
                sym: EllipticParams::new(Params::new(cfg.p, cfg.p)?, cfg.k)?,
            },
            Regime::Separatrix => Branch::Separatrix,
            Regime::Rotating => Branch::Rotating {
                conj_am: EllipticParams::new(conj.clone(), 1.0 / cfg.k)?,
            },
        };
        Ok(ClosedForm {
            cfg,
            scale,
            conj,
            branch,
        })
    }

    pub fn config(&self) -> &PendulumConfig {
        &self.cfg
    }

    pub fn theta(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!(
                "closed-form trajectory is defined for t >= 0, got {t}"
            )));
        }
        let u = self.cfg.lambda * t;
        match &self.branch {
            Branch::Oscillatory { sym } => {
                let s = self.cfg.k * sym.sn(u);
                let angle = self.conj.arcsin(s.abs().min(1.0))?;
                Ok(self.scale * angle.copysign(s))
            }
            Branch::Separatrix => {
                let s = tanh_q(self.cfg.p, u)?;
                Ok(self.scale * self.conj.arcsin(s)?)
            }
            Branch::Rotating { conj_am } => Ok(self.scale * conj_am.am(self.cfg.k * u)),
        }
    }

    /// Peak angle in the oscillatory regime: 2^(2/p) arcsin_{p*,p}(k).
    pub fn amplitude(&self) -> Result<f64> {
        match self.branch {
            Branch::Oscillatory { .. } => Ok(self.scale * self.conj.arcsin(self.cfg.k)?),
            _ => Err(Error::Regime(
                "amplitude is finite only below the separatrix".into(),
            )),
        }
    }

    /// The separatrix limit angle pi_{2,p} (also 2^(2/p - 1) pi_{p*,p}).
    pub fn limit_angle(&self) -> f64 {
        self.scale * self.conj.half_pi()
    }
}

/// Closed-form angle at a single time.
pub fn pendulum_closed_form(cfg: &PendulumConfig, t: f64) -> Result<f64> {
    ClosedForm::new(*cfg)?.theta(t)
}

/// Oscillation period 4 K_{p,p}(k) / lambda; defined only for k < 1.
pub fn pendulum_period(cfg: &PendulumConfig) -> Result<f64> {
    if cfg.regime() != Regime::Oscillatory {
        return Err(Error::Regime(format!(
            "period is defined for k < 1, got k = {}",
            cfg.k
        )));
    }
    let e = EllipticParams::new(Params::new(cfg.p, cfg.p)?, cfg.k)?;
    Ok(4.0 * e.k_complete().value / cfg.lambda)
}

/// One sample of a numerically integrated trajectory.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub theta: f64,
    pub theta_dot: f64,
    pub energy_residual: f64,
}

/// Integrate the pendulum as the first-order system in (theta, phi) with the
/// momentum phi = |theta'|^(p-2) theta', cross-validating the closed form.
///
/// The energy residual
///   (1/p)|theta'|^p + (2 lambda^p / p)(1 - cos_{2,p} theta) - (1/p) omega_0^p
/// is tracked along the trajectory. Each candidate step may spend at most
/// its share of the total drift budget (~10 rel_tol omega_0^p over t_end);
/// steps producing more get rejected and retried smaller.
pub fn pendulum_numeric(
    cfg: &PendulumConfig,
    t_end: f64,
    rel_tol: f64,
) -> Result<Vec<TrajectoryPoint>> {
    if !(t_end > 0.0) {
        return Err(Error::Domain(format!("t_end must be positive, got {t_end}")));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let p = cfg.p;
    let p_star = p / (p - 1.0);
    let lambda_p = cfg.lambda.powf(p);
    let two_p = Params::new(2.0, p)?;
    // Warm the inversion cache before the right-hand side starts hammering it.
    let _ = two_p.sin(0.25 * two_p.half_pi());

    let energy = |theta: f64, phi: f64| -> f64 {
        let theta_dot_pow = phi.abs().powf(p_star);
        theta_dot_pow / p + 2.0 * lambda_p / p * (1.0 - two_p.cos(theta))
            - cfg.omega0.powf(p) / p
    };

    let rhs = |_t: f64, y: &[f64; 2]| -> [f64; 2] {
        let [theta, phi] = *y;
        [
            odd_pow(phi, p_star - 1.0),
            -lambda_p * odd_pow(two_p.sin(theta), p - 1.0),
        ]
    };

    let budget = 5.0 * rel_tol * cfg.omega0.powf(p);
    // Each energy evaluation carries rounding at the scale of its terms.
    let noise_floor = 32.0 * f64::EPSILON * (cfg.omega0.powf(p) + 4.0 * lambda_p) / p;
    let solver = Dopri5::new(rel_tol, 1e-12).with_h_max(t_end / 200.0);
    let y0 = [0.0, cfg.omega0.powf(p - 1.0)];
    let mut t_prev = 0.0f64;
    let mut e_prev = energy(y0[0], y0[1]);
    let path = solver.solve(rhs, 0.0, y0, t_end, |t, y| {
        let e = energy(y[0], y[1]);
        let allowance = (2.0 * budget * (t - t_prev) / t_end).max(noise_floor);
        if (e - e_prev).abs() > allowance {
            true
        } else {
            t_prev = t;
            e_prev = e;
            false
        }
    })?;

    Ok(path
        .into_iter()
        .map(|(t, [theta, phi])| TrajectoryPoint {
            t,
            theta,
            theta_dot: odd_pow(phi, p_star - 1.0),
            energy_residual: energy(theta, phi),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_regimes() {
        let p = 3.0;
        let scale = 2.0f64.powf(2.0 / p);
        let osc = PendulumConfig::new(p, 1.0, 0.5 * scale).unwrap();
        assert_eq!(osc.regime(), Regime::Oscillatory);
        assert!((osc.k - 0.5).abs() < 1e-15);
        let sep = PendulumConfig::new(p, 1.0, scale).unwrap();
        assert_eq!(sep.regime(), Regime::Separatrix);
        let rot = PendulumConfig::new(p, 1.0, 2.0 * scale).unwrap();
        assert_eq!(rot.regime(), Regime::Rotating);
        assert!(PendulumConfig::new(1.0, 1.0, 1.0).is_err());
        assert!(PendulumConfig::new(2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn closed_form_starts_at_zero_in_every_regime() {
        for &k in &[0.4, 1.0, 1.7] {
            let p = 2.5;
            let cfg = PendulumConfig::new(p, 1.3, k * 1.3 * 2.0f64.powf(2.0 / p)).unwrap();
            let cf = ClosedForm::new(cfg).unwrap();
            assert_eq!(cf.theta(0.0).unwrap(), 0.0, "k = {k}");
            assert!(cf.theta(-1.0).is_err());
        }
    }

    #[test]
    fn closed_form_initial_slope_is_omega0() {
        for &(p, k) in &[(2.0, 0.5), (3.0, 0.8), (1.5, 1.0), (2.5, 1.6)] {
            let lambda = 1.1;
            let omega0 = k * lambda * 2.0f64.powf(2.0 / p);
            let cfg = PendulumConfig::new(p, lambda, omega0).unwrap();
            let cf = ClosedForm::new(cfg).unwrap();
            let h = 1e-6;
            let slope = (cf.theta(2.0 * h).unwrap() - cf.theta(h).unwrap()) / h;
            assert!(
                (slope - omega0).abs() < 1e-4 * omega0.max(1.0),
                "(p,k)=({p},{k}): slope {slope} vs {omega0}"
            );
        }
    }

    #[test]
    fn oscillatory_amplitude_and_period() {
        let p = 3.0;
        let k = 0.5;
        let lambda = 1.0;
        let cfg = PendulumConfig::new(p, lambda, k * 2.0f64.powf(2.0 / p)).unwrap();
        let cf = ClosedForm::new(cfg).unwrap();
        let period = pendulum_period(&cfg).unwrap();
        // theta at a quarter period is the amplitude.
        let amp = cf.amplitude().unwrap();
        let theta_quarter = cf.theta(period / 4.0).unwrap();
        assert!((theta_quarter - amp).abs() < 1e-9);
        // Periodicity of the closed form.
        for &t in &[0.3, 1.1, 2.9] {
            let a = cf.theta(t).unwrap();
            let b = cf.theta(t + period).unwrap();
            assert!((a - b).abs() < 1e-9, "t = {t}");
        }
        // k -> 0 limit: period approaches 2 pi_{p,p} / lambda from above.
        let tiny = PendulumConfig::new(p, lambda, 1e-6).unwrap();
        let base = 2.0 * Params::new(p, p).unwrap().pi() / lambda;
        assert!((pendulum_period(&tiny).unwrap() - base).abs() < 1e-6);
        // Monotone growth of the period in k.
        let big = PendulumConfig::new(p, lambda, 0.99 * 2.0f64.powf(2.0 / p)).unwrap();
        assert!(pendulum_period(&big).unwrap() > period);
        // Rotating configurations have no period.
        let rot = PendulumConfig::new(p, lambda, 3.0).unwrap();
        assert!(matches!(pendulum_period(&rot), Err(Error::Regime(_))));
    }

    #[test]
    fn separatrix_is_monotone_with_finite_limit() {
        let p = 3.0;
        let lambda = 1.0;
        let cfg = PendulumConfig::new(p, lambda, 2.0f64.powf(2.0 / p)).unwrap();
        assert_eq!(cfg.regime(), Regime::Separatrix);
        let cf = ClosedForm::new(cfg).unwrap();
        let limit = cf.limit_angle();
        let mut prev = -1.0;
        for i in 0..30 {
            let t = 0.3 * i as f64;
            let v = cf.theta(t).unwrap();
            assert!(v > prev, "monotone at t = {t}");
            assert!(v < limit + 1e-12);
            prev = v;
        }
        // pi_{2,p} = 2^(2/p - 1) pi_{p*,p}.
        let two_p = Params::new(2.0, p).unwrap();
        assert!((limit - two_p.pi()).abs() < 1e-12);
        assert!((cf.theta(40.0 / lambda).unwrap() - limit).abs() < 1e-4);
    }

    #[test]
    fn rotating_grows_without_bound() {
        let p = 2.0;
        let cfg = PendulumConfig::new(p, 1.0, 2.5 * 2.0f64.powf(2.0 / p)).unwrap();
        let cf = ClosedForm::new(cfg).unwrap();
        let mut prev = -1.0;
        let mut last = 0.0;
        for i in 1..=12 {
            let t = i as f64;
            let v = cf.theta(t).unwrap();
            assert!(v > prev);
            prev = v;
            last = v;
        }
        let bound = 3.0 * Params::new(2.0, p).unwrap().pi();
        assert!(last > bound, "theta(12) = {last} should exceed {bound}");
    }

    #[test]
    fn numeric_matches_closed_form_classical() {
        // p = 2 is the textbook pendulum.
        let cfg = PendulumConfig::new(2.0, 1.0, 1.0).unwrap();
        let period = pendulum_period(&cfg).unwrap();
        let cf = ClosedForm::new(cfg).unwrap();
        let path = pendulum_numeric(&cfg, period, 1e-9).unwrap();
        let stride = (path.len() / 120).max(1);
        for pt in path.iter().step_by(stride) {
            let want = cf.theta(pt.t).unwrap();
            assert!(
                (pt.theta - want).abs() < 1e-6,
                "t = {}: {} vs {want}",
                pt.t,
                pt.theta
            );
        }
        let drift = path
            .iter()
            .map(|pt| pt.energy_residual.abs())
            .fold(0.0, f64::max);
        assert!(drift <= 1e-7 * cfg.omega0.powf(2.0), "drift {drift}");
    }

    #[test]
    fn numeric_small_amplitude_period() {
        // Near-linear oscillation: theta returns to zero after one exact
        // period, and that period sits next to its k -> 0 limit 2 pi_{p,p}.
        let p = 2.5;
        let cfg = PendulumConfig::new(p, 1.0, 0.05).unwrap();
        let period = pendulum_period(&cfg).unwrap();
        let nominal = 2.0 * Params::new(p, p).unwrap().pi();
        assert!((period - nominal).abs() < 0.01 * nominal);
        let path = pendulum_numeric(&cfg, period, 1e-8).unwrap();
        let last = path.last().unwrap();
        assert!(
            last.theta.abs() < 1e-4 * cfg.omega0,
            "theta(T) = {}",
            last.theta
        );
    }
}

#[cfg(test)]
mod debug_tests {
    use super::*;
    use crate::numerics::ode::Dopri5;

    #[test]
    fn debug_small_amp_thrash() {
        let cfg = PendulumConfig::new(2.5, 1.0, 0.05).unwrap();
        let p = cfg.p;
        let p_star = p / (p - 1.0);
        let lambda_p = cfg.lambda.powf(p);
        let two_p = Params::new(2.0, p).unwrap();
        let energy = |theta: f64, phi: f64| -> f64 {
            phi.abs().powf(p_star) / p + 2.0 * lambda_p / p * (1.0 - two_p.cos(theta))
                - cfg.omega0.powf(p) / p
        };
        let rhs = |_t: f64, y: &[f64; 2]| -> [f64; 2] {
            [
                odd_pow(y[1], p_star - 1.0),
                -lambda_p * odd_pow(two_p.sin(y[0]), p - 1.0),
            ]
        };
        let budget = 5.0 * 1e-8 * cfg.omega0.powf(p);
        let noise_floor = 32.0 * f64::EPSILON * (cfg.omega0.powf(p) + 4.0 * lambda_p) / p;
        println!("budget={budget:e} noise_floor={noise_floor:e}");
        let t_end = pendulum_period(&cfg).unwrap();
        let solver = Dopri5::new(1e-8, 1e-12).with_h_max(t_end / 200.0);
        let y0 = [0.0, cfg.omega0.powf(p - 1.0)];
        let mut t_prev = 0.0f64;
        let mut e_prev = energy(y0[0], y0[1]);
        let mut vetoes = 0usize;
        let mut calls = 0usize;
        let r = solver.solve(rhs, 0.0, y0, t_end, |t, y| {
            calls += 1;
            let e = energy(y[0], y[1]);
            let allowance = (2.0 * budget * (t - t_prev) / t_end).max(noise_floor);
            if (e - e_prev).abs() > allowance {
                vetoes += 1;
                if vetoes % 50000 == 1 {
                    println!("veto#{vetoes} t_prev={t_prev:.6} h={:.3e} dE={:+.3e} allow={:.3e}", t - t_prev, e - e_prev, allowance);
                }
                true
            } else {
                t_prev = t;
                e_prev = e;
                false
            }
        });
        match r {
            Ok(path) => println!("ok: {} steps, {} vetoes, {} calls", path.len(), vetoes, calls),
            Err(e) => println!("err at t={t_prev} after {vetoes} vetoes {calls} calls: {e}"),
        }
    }
}
