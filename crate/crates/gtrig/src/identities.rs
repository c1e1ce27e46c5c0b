//! Residual checks for the multiple-angle, symmetry, product and series
//! identities connecting the (2, p) and (p*, p) families, plus the
//! lemniscatic special cases, with a deterministic reporting suite.
//!
//! Each check evaluates both sides of one identity through paths that share
//! as little code as possible (incomplete-beta inversion on one side,
//! quadrature or log-gamma products on the other) and returns the absolute
//! residual, or a relative one for products of pi values.

use crate::error::{Error, Result};
use crate::numerics::gamma::ln_gamma;
use crate::trig::{odd_pow, Params};
use serde::Serialize;

/// Identity tags understood by the suite and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityId {
    MaSin,
    MaCos,
    MaTau,
    PiProduct,
    Egl,
    LemMaf,
    Pythagorean,
    Symmetry,
    KeyPi,
    CubicEgl,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::MaSin,
        IdentityId::MaCos,
        IdentityId::MaTau,
        IdentityId::PiProduct,
        IdentityId::Egl,
        IdentityId::LemMaf,
        IdentityId::Pythagorean,
        IdentityId::Symmetry,
        IdentityId::KeyPi,
        IdentityId::CubicEgl,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::MaSin => "MA_SIN",
            IdentityId::MaCos => "MA_COS",
            IdentityId::MaTau => "MA_TAU",
            IdentityId::PiProduct => "PI_PRODUCT",
            IdentityId::Egl => "EGL",
            IdentityId::LemMaf => "LEM_MAF",
            IdentityId::Pythagorean => "PYTHAGOREAN",
            IdentityId::Symmetry => "SYMMETRY",
            IdentityId::KeyPi => "KEY_PI",
            IdentityId::CubicEgl => "CUBIC_EGL",
        }
    }

    /// Default pass tolerance; absolute for bounded quantities, relative for
    /// the pi products.
    pub fn default_tol(&self) -> f64 {
        match self {
            IdentityId::MaSin | IdentityId::MaCos | IdentityId::MaTau => 1e-9,
            IdentityId::PiProduct | IdentityId::KeyPi => 1e-12,
            IdentityId::Egl | IdentityId::CubicEgl => 1e-9,
            IdentityId::LemMaf => 1e-10,
            IdentityId::Pythagorean => 1e-11,
            IdentityId::Symmetry => 1e-10,
        }
    }
}

impl std::str::FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == upper)
            .ok_or_else(|| Error::Domain(format!("unknown identity id `{s}`")))
    }
}

/// One evaluated sample: the parameter, the order n for product identities,
/// and the abscissa where applicable.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridPoint {
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
}

/// Outcome of running one identity over its grid.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub grid: Vec<GridPoint>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Which identities to run and over what grid.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub ids: Vec<IdentityId>,
    pub p_values: Vec<f64>,
    pub points_per_domain: usize,
    /// Overrides every identity's default tolerance when set.
    pub tol: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            ids: IdentityId::ALL.to_vec(),
            p_values: vec![1.5, 2.0, 2.5, 3.0, 4.0, 7.5],
            points_per_domain: 64,
            tol: None,
        }
    }
}

/// sin_{2,p}(2^(2/p) x) vs 2^(2/p) sin_{p*,p}(x) |cos_{p*,p}(x)|^(p*-2) cos_{p*,p}(x),
/// valid for every real x.
pub fn check_ma_sin(p: f64, x: f64) -> Result<f64> {
    let two_p = Params::new(2.0, p)?;
    let conj = Params::conjugate_pair(p)?;
    Ok(ma_sin_residual(&two_p, &conj, x))
}

fn ma_sin_residual(two_p: &Params, conj: &Params, x: f64) -> f64 {
    let scale = 2.0f64.powf(2.0 / two_p.q());
    let lhs = two_p.sin(scale * x);
    let (s, c) = conj.sin_cos(x);
    let rhs = scale * s * odd_pow(c, conj.p() - 1.0);
    (lhs - rhs).abs()
}

/// cos_{2,p}(2^(2/p) x) against all three equivalent right-hand sides
/// (|cos|^{p*} - |sin|^p, 1 - 2|sin|^p, 2|cos|^{p*} - 1); returns the worst.
pub fn check_ma_cos(p: f64, x: f64) -> Result<f64> {
    let two_p = Params::new(2.0, p)?;
    let conj = Params::conjugate_pair(p)?;
    Ok(ma_cos_residual(&two_p, &conj, x))
}

fn ma_cos_residual(two_p: &Params, conj: &Params, x: f64) -> f64 {
    let p = two_p.q();
    let scale = 2.0f64.powf(2.0 / p);
    let lhs = two_p.cos(scale * x);
    let (s, c) = conj.sin_cos(x);
    let cos_pow = c.abs().powf(conj.p());
    let sin_pow = s.abs().powf(p);
    [
        cos_pow - sin_pow,
        1.0 - 2.0 * sin_pow,
        2.0 * cos_pow - 1.0,
    ]
    .iter()
    .map(|rhs| (lhs - rhs).abs())
    .fold(0.0, f64::max)
}

/// Doubling formula for the generalized tangents:
/// tau_{2,p}(2^(2/p) x) = 2^(2/p) tau_{p*,p}(x) / sgn(d) |d|^(2/p) with
/// d = 1 - |tau_{p*,p}(x)|^p.
///
/// The denominator power 2/p follows from substituting the sine and cosine
/// doubling formulas into both tangents (it is invisible at p = 2, where it
/// collapses onto the classical tangent doubling).
pub fn check_ma_tau(p: f64, x: f64) -> Result<f64> {
    let two_p = Params::new(2.0, p)?;
    let conj = Params::conjugate_pair(p)?;
    ma_tau_residual(&two_p, &conj, x)
}

fn ma_tau_residual(two_p: &Params, conj: &Params, x: f64) -> Result<f64> {
    let p = two_p.q();
    let scale = 2.0f64.powf(2.0 / p);
    let lhs = two_p.tau(scale * x)?;
    let t = conj.tau(x)?;
    let rhs = scale * t / odd_pow(1.0 - t.abs().powf(p), 2.0 / p);
    Ok((lhs - rhs).abs())
}

/// Product identity over conjugate-type pi values:
/// prod_{k=1}^{n-1} pi_{(p/k)*, p} = n^{1 - n/p} prod_{k=1}^{n-1} pi_{(n/k)*, p},
/// for integer 2 <= n < p + 1; evaluated in log space, relative residual.
pub fn check_pi_product(p: f64, n: u32) -> Result<f64> {
    if n < 2 || (n as f64) >= p + 1.0 {
        return Err(Error::Domain(format!(
            "pi product requires an integer 2 <= n < p + 1, got n = {n}, p = {p}"
        )));
    }
    // ln pi_{(m/k)*, m-parameterized family}: first parameter (m/k)* has
    // conjugate m/k, so ln pi = ln(2/p) + ln B(k/m, 1/p).
    let ln_pi_factor = |k: f64, m: f64| -> Result<f64> {
        Ok((2.0 / p).ln() + ln_gamma(k / m)? + ln_gamma(1.0 / p)? - ln_gamma(k / m + 1.0 / p)?)
    };
    let mut lhs = 0.0;
    let mut rhs = (1.0 - n as f64 / p) * (n as f64).ln();
    for k in 1..n {
        lhs += ln_pi_factor(k as f64, p)?;
        rhs += ln_pi_factor(k as f64, n as f64)?;
    }
    Ok((lhs - rhs).exp_m1().abs())
}

/// Relative residual of pi_{2,p} / 2^(2/p) = pi_{p*,p} / 2.
pub fn check_key_pi(p: f64) -> Result<f64> {
    let two_p = Params::new(2.0, p)?;
    let conj = Params::conjugate_pair(p)?;
    let lhs = two_p.pi() / 2.0f64.powf(2.0 / p);
    let rhs = conj.pi() / 2.0;
    Ok(((lhs - rhs) / rhs).abs())
}

/// The doubling formula for sin_{4/3,4} in its three guises: the direct
/// form, the lemniscatic rewrite through sl(sqrt(2) x), and the cubic
/// relation sl(2 sqrt(2) x) = sqrt(2) sin_{4/3,4}(2x)(1 - sin^4)^{1/4}.
/// Valid on [0, pi_{4/3,4}/4); returns the worst of the three residuals.
pub fn check_egl(x: f64) -> Result<f64> {
    let quarter_family = Params::new(4.0 / 3.0, 4.0)?;
    let lem = Params::new(2.0, 4.0)?;
    egl_residual(&quarter_family, &lem, x)
}

fn egl_residual(qf: &Params, lem: &Params, x: f64) -> Result<f64> {
    let quarter = qf.pi() / 4.0;
    if !(0.0..quarter).contains(&x) {
        return Err(Error::Domain(format!(
            "doubling formula domain is [0, {quarter}), got {x}"
        )));
    }
    let sqrt2 = 2.0f64.sqrt();
    let lhs = qf.sin(2.0 * x);
    let (s, c) = qf.sin_cos(x);
    let direct = 2.0 * s * c.powf(1.0 / 3.0)
        / (1.0 + 4.0 * s.powi(4) * c.powf(4.0 / 3.0)).sqrt();
    let sl = lem.sin(sqrt2 * x);
    let rewrite = sqrt2 * sl / (1.0 + sl.powi(4)).sqrt();
    let cubic = cubic_residual(qf, lem, x);
    Ok((lhs - direct)
        .abs()
        .max((lhs - rewrite).abs())
        .max(cubic))
}

/// Residual of sl(2 sqrt(2) x) = sqrt(2) sin_{4/3,4}(2x) (1 - sin_{4/3,4}^4(2x))^{1/4}.
pub fn check_cubic_egl(x: f64) -> Result<f64> {
    let qf = Params::new(4.0 / 3.0, 4.0)?;
    let lem = Params::new(2.0, 4.0)?;
    let quarter = qf.pi() / 4.0;
    if !(0.0..quarter).contains(&x) {
        return Err(Error::Domain(format!(
            "cubic relation domain is [0, {quarter}), got {x}"
        )));
    }
    Ok(cubic_residual(&qf, &lem, x))
}

fn cubic_residual(qf: &Params, lem: &Params, x: f64) -> f64 {
    let sqrt2 = 2.0f64.sqrt();
    let s2 = qf.sin(2.0 * x);
    let lhs = lem.sin(2.0 * sqrt2 * x);
    let rhs = sqrt2 * s2 * (1.0 - s2.powi(4)).max(0.0).powf(0.25);
    (lhs - rhs).abs()
}

/// Lemniscatic doubling: sl(2x) = 2 sl(x) sqrt(1 - sl^4 x) / (1 + sl^4 x)
/// on [0, varpi/2].
pub fn check_lem_maf(x: f64) -> Result<f64> {
    let lem = Params::new(2.0, 4.0)?;
    lem_maf_residual(&lem, x)
}

fn lem_maf_residual(lem: &Params, x: f64) -> Result<f64> {
    let half = lem.half_pi();
    if !(0.0..=half).contains(&x) {
        return Err(Error::Domain(format!(
            "lemniscatic doubling domain is [0, {half}], got {x}"
        )));
    }
    let s = lem.sin(x);
    let s4 = s.powi(4);
    let lhs = lem.sin(2.0 * x);
    let rhs = 2.0 * s * (1.0 - s4).max(0.0).sqrt() / (1.0 + s4);
    Ok((lhs - rhs).abs())
}

/// | |cos|^p + |sin|^q - 1 | for one parameter pair at one point.
pub fn check_pythagorean(p: f64, q: f64, x: f64) -> Result<f64> {
    let params = Params::new(p, q)?;
    let (s, c) = params.sin_cos(x);
    Ok((c.abs().powf(p) + s.abs().powf(q) - 1.0).abs())
}

/// Conjugate-pair reflection symmetry on [0, pi_{p*,p}/2]:
/// sin(pi/2 - x) = cos^{p*-1}(x) and cos^{p*-1}(pi/2 - x) = sin(x).
pub fn check_symmetry(p: f64, x: f64) -> Result<f64> {
    let conj = Params::conjugate_pair(p)?;
    symmetry_residual(&conj, x)
}

fn symmetry_residual(conj: &Params, x: f64) -> Result<f64> {
    let half = conj.half_pi();
    if !(0.0..=half).contains(&x) {
        return Err(Error::Domain(format!(
            "symmetry domain is [0, {half}], got {x}"
        )));
    }
    let e = conj.p() - 1.0;
    let r1 = (conj.sin(half - x) - conj.cos(x).powf(e)).abs();
    let r2 = (conj.cos(half - x).powf(e) - conj.sin(x)).abs();
    Ok(r1.max(r2))
}

/// Run every requested identity over the deterministic default grids and
/// collect one report per identity. Per-point failures (pole guards, domain
/// edges) never abort the suite; they surface as infinite residuals.
pub fn run_suite(spec: &GridSpec) -> Vec<IdentityReport> {
    spec.ids.iter().map(|&id| run_identity(id, spec)).collect()
}

fn run_identity(id: IdentityId, spec: &GridSpec) -> IdentityReport {
    let tol = spec.tol.unwrap_or_else(|| id.default_tol());
    let m = spec.points_per_domain.max(2);
    let mut grid = Vec::new();
    let mut worst: f64 = 0.0;

    let mut record = |p: f64, n: Option<u32>, x: Option<f64>, r: Result<f64>| {
        grid.push(GridPoint { p, n, x });
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    };

    match id {
        IdentityId::MaSin | IdentityId::MaCos => {
            for &p in &spec.p_values {
                let (Ok(two_p), Ok(conj)) = (Params::new(2.0, p), Params::conjugate_pair(p))
                else {
                    record(p, None, None, Err(Error::Domain("bad p".into())));
                    continue;
                };
                // Two full periods of the coupled identity.
                let span = conj.pi();
                for j in 0..m {
                    let x = -span + 2.0 * span * j as f64 / (m - 1) as f64;
                    let r = match id {
                        IdentityId::MaSin => ma_sin_residual(&two_p, &conj, x),
                        _ => ma_cos_residual(&two_p, &conj, x),
                    };
                    record(p, None, Some(x), Ok(r));
                }
            }
        }
        IdentityId::MaTau => {
            for &p in &spec.p_values {
                let (Ok(two_p), Ok(conj)) = (Params::new(2.0, p), Params::conjugate_pair(p))
                else {
                    record(p, None, None, Err(Error::Domain("bad p".into())));
                    continue;
                };
                // Both sides have poles at odd multiples of pi_{p*,p}/4;
                // sample the two open subintervals between them.
                let pi = conj.pi();
                let half_m = (m / 2).max(1);
                for j in 0..half_m {
                    let f = 0.03 + (0.22 - 0.03) * j as f64 / (half_m - 1).max(1) as f64;
                    record(p, None, Some(f * pi), ma_tau_residual(&two_p, &conj, f * pi));
                }
                for j in 0..half_m {
                    let f = 0.28 + (0.47 - 0.28) * j as f64 / (half_m - 1).max(1) as f64;
                    record(p, None, Some(f * pi), ma_tau_residual(&two_p, &conj, f * pi));
                }
            }
        }
        IdentityId::PiProduct => {
            for &p in &spec.p_values {
                let n_max = (p + 1.0 - 1e-9).floor() as u32;
                for n in 2..=n_max.max(1) {
                    if n >= 2 {
                        record(p, Some(n), None, check_pi_product(p, n));
                    }
                }
            }
        }
        IdentityId::KeyPi => {
            for &p in &spec.p_values {
                record(p, None, None, check_key_pi(p));
            }
        }
        IdentityId::Egl | IdentityId::CubicEgl => {
            let qf = Params::new(4.0 / 3.0, 4.0).expect("fixed parameters");
            let lem = Params::new(2.0, 4.0).expect("fixed parameters");
            let quarter = qf.pi() / 4.0;
            for j in 0..m {
                let x = quarter * j as f64 / m as f64;
                let r = match id {
                    IdentityId::Egl => egl_residual(&qf, &lem, x),
                    _ => Ok(cubic_residual(&qf, &lem, x)),
                };
                record(4.0 / 3.0, None, Some(x), r);
            }
        }
        IdentityId::LemMaf => {
            let lem = Params::new(2.0, 4.0).expect("fixed parameters");
            let half = lem.half_pi();
            for j in 0..m {
                let x = half * j as f64 / (m - 1) as f64;
                record(2.0, None, Some(x), lem_maf_residual(&lem, x));
            }
        }
        IdentityId::Pythagorean => {
            for &p in &spec.p_values {
                for params in [Params::new(2.0, p), Params::conjugate_pair(p)]
                    .into_iter()
                    .flatten()
                {
                    let span = params.pi();
                    for j in 0..m / 2 {
                        let x = -span + 2.0 * span * j as f64 / (m / 2 - 1).max(1) as f64;
                        let (s, c) = params.sin_cos(x);
                        let r =
                            (c.abs().powf(params.p()) + s.abs().powf(params.q()) - 1.0).abs();
                        record(p, None, Some(x), Ok(r));
                    }
                }
            }
        }
        IdentityId::Symmetry => {
            for &p in &spec.p_values {
                let Ok(conj) = Params::conjugate_pair(p) else {
                    record(p, None, None, Err(Error::Domain("bad p".into())));
                    continue;
                };
                for j in 0..m {
                    let x = conj.half_pi() * j as f64 / (m - 1) as f64;
                    record(p, None, Some(x), symmetry_residual(&conj, x));
                }
            }
        }
    }

    let pass = worst <= tol && !grid.is_empty();
    IdentityReport {
        identity_id: id,
        grid,
        max_residual: worst,
        tol,
        pass,
    }
}
