//! Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4)).
//!
//! Small fixed-dimension solver used for cross-validating closed-form
//! trajectories. Besides the usual embedded error controller, callers may
//! veto a candidate step (e.g. on conserved-quantity drift); a veto halves
//! the step like any error rejection.

use crate::error::{Error, Result};

/// Dormand-Prince 5(4) coefficients.
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub struct Dopri5 {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Dopri5 {
            rel_tol,
            abs_tol,
            h_max: f64::INFINITY,
            h_min: 1e-14,
            max_steps: 4_000_000,
        }
    }

    pub fn with_h_max(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }

    /// Integrate y' = f(t, y) from (t0, y0) to t_end, recording every
    /// accepted step. `veto` may reject a candidate (t_new, y_new); the
    /// step is then retried at half size.
    pub fn solve<const N: usize>(
        &self,
        f: impl Fn(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        mut veto: impl FnMut(f64, &[f64; N]) -> bool,
    ) -> Result<Vec<(f64, [f64; N])>> {
        let span = t_end - t0;
        if !(span > 0.0) {
            return Err(Error::InvalidInterval { a: t0, b: t_end });
        }
        let mut out = Vec::new();
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y);
        let mut h = (span / 100.0).min(self.h_max);
        out.push((t, y));

        for _ in 0..self.max_steps {
            if t >= t_end {
                return Ok(out);
            }
            h = h.min(t_end - t).min(self.h_max);
            if h < self.h_min {
                return Err(Error::StepFailure { t, h });
            }

            let mut k = [[0.0; N]; 7];
            k[0] = k1;
            for stage in 0..6 {
                let mut yi = y;
                for j in 0..=stage {
                    let a = A[stage][j];
                    if a != 0.0 {
                        for d in 0..N {
                            yi[d] += h * a * k[j][d];
                        }
                    }
                }
                k[stage + 1] = f(t + C[stage] * h, &yi);
            }
            // 5th-order solution is the last stage's input (FSAL).
            let mut y_new = y;
            for j in 0..6 {
                let a = A[5][j];
                if a != 0.0 {
                    for d in 0..N {
                        y_new[d] += h * a * k[j][d];
                    }
                }
            }

            let mut err_norm_sq = 0.0;
            for d in 0..N {
                let mut e = 0.0;
                for j in 0..7 {
                    e += E[j] * k[j][d];
                }
                e *= h;
                let scale = self.abs_tol + self.rel_tol * y[d].abs().max(y_new[d].abs());
                err_norm_sq += (e / scale) * (e / scale);
            }
            let err_norm = (err_norm_sq / N as f64).sqrt();

            if err_norm <= 1.0 {
                let t_new = t + h;
                if veto(t_new, &y_new) {
                    h *= 0.5;
                    continue;
                }
                t = t_new;
                y = y_new;
                k1 = k[6];
                out.push((t, y));
                let factor = if err_norm == 0.0 {
                    3.0
                } else {
                    // Modest growth keeps rejection thrash down around the
                    // non-Lipschitz turning points of the pendulum system.
                    (0.9 * err_norm.powf(-0.2)).clamp(0.2, 3.0)
                };
                h *= factor;
            } else {
                h *= (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        Err(Error::NonConvergence {
            what: "ODE integration step budget",
            err_est: (t_end - t).abs(),
            tol: 0.0,
        })
    }
}
