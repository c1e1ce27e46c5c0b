//! `gtrig` -- evaluate generalized trigonometric/elliptic functions, emit
//! constants tables, run the identity verification suite, simulate the
//! p-Laplacian pendulum, and check p-Laplacian eigenpairs.
//!
//! Exit codes: 0 success (and all checks passed), 1 usage error, 2 domain
//! error, 3 convergence failure, 4 verification failure.

use clap::{Parser, Subcommand, ValueEnum};
use gtrig::constants::{self, SeriesFamily};
use gtrig::eigen::{make_eigenpair, product_eigen_check, EigenKind};
use gtrig::elliptic::{tanh_q, EllipticParams};
use gtrig::identities::{run_suite, GridSpec, IdentityId, IdentityReport};
use gtrig::pendulum::{pendulum_numeric, PendulumConfig};
use gtrig::{arctau_star, Error, Params};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "gtrig",
    version,
    about = "Generalized trigonometric and elliptic special functions"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Tolerance for series/quadrature backends; `verify` keeps per-identity
    /// defaults unless this is given explicitly.
    #[arg(long, global = true, env = "GTRIG_TOL")]
    tol: Option<f64>,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function on a list of abscissas.
    Eval {
        /// One of: sin, cos, tau, arcsin, am, K, sn, tanh.
        function: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        /// Elliptic modulus, needed by am/K/sn.
        #[arg(long)]
        k: Option<f64>,
        /// Abscissas (comma separated or repeated).
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
    },
    /// Emit a table of series/integral constants.
    Constants {
        /// Families: GL_PQ, G_P, C_P, LPI1, LPI2, LPI_EVEN, LPI_ODD.
        #[arg(long, value_delimiter = ',', required = true)]
        family: Vec<String>,
        /// Parameter values for the p-dependent families.
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
    },
    /// Run identity verification and report residuals.
    Verify {
        /// Identity ids (default: all).
        #[arg(long, value_delimiter = ',')]
        id: Vec<String>,
        /// Parameter grid (default: 1.5, 2, 2.5, 3, 4, 7.5).
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        /// Sample points per fundamental domain.
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// Integrate the p-Laplacian pendulum numerically.
    Pendulum {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        omega0: f64,
        #[arg(long, name = "t-end")]
        t_end: f64,
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
    },
    /// Build eigenpairs and verify the product construction.
    Eigen {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: u32,
        #[arg(long, name = "L", default_value_t = 1.0)]
        length: f64,
        /// Dirichlet amplitude R.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Neumann amplitude Q.
        #[arg(long, name = "Q", default_value_t = 1.0)]
        q_amp: f64,
        /// Grid size for residuals and zero counting.
        #[arg(long, default_value_t = 2048)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version output is a success, not a usage error.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let format = cli.format;
    let output = cli.output.clone();
    match run(cli) {
        Ok(report) => {
            let body = render(&report, format);
            if let Some(path) = output {
                if let Err(e) = std::fs::write(&path, body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{body}");
            }
            ExitCode::from(report.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } | Error::StepFailure { .. } => 3,
        _ => 2,
    }
}

/// A rendered table: named columns plus rows, with the JSON command envelope.
struct Report {
    command: &'static str,
    params: Value,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
    pass: Option<bool>,
    exit_code: u8,
}

fn run(cli: Cli) -> Result<Report, Error> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    match cli.command {
        Command::Eval { function, p, q, k, x } => eval_cmd(&function, p, q, k, &x),
        Command::Constants { family, p } => constants_cmd(&family, &p, tol),
        Command::Verify { id, p, points } => verify_cmd(&id, &p, points, cli.tol),
        Command::Pendulum {
            p,
            lambda,
            omega0,
            t_end,
            rel_tol,
        } => pendulum_cmd(p, lambda, omega0, t_end, rel_tol),
        Command::Eigen {
            p,
            n,
            length,
            r,
            q_amp,
            samples,
        } => eigen_cmd(p, n, length, r, q_amp, samples),
    }
}

fn need(opt: Option<f64>, what: &str) -> Result<f64, Error> {
    opt.ok_or_else(|| Error::Domain(format!("missing required flag --{what}")))
}

fn eval_cmd(
    function: &str,
    p: Option<f64>,
    q: Option<f64>,
    k: Option<f64>,
    xs: &[f64],
) -> Result<Report, Error> {
    // Closed-path evaluations carry a uniform rounding-level estimate; the
    // complete integral reports its quadrature estimate.
    let eps_of = |v: f64| 4.0 * f64::EPSILON * (1.0 + v.abs());
    let mut rows = Vec::new();
    let mut push = |x: f64, v: f64, e: f64| rows.push(vec![json!(x), json!(v), json!(e)]);

    match function {
        "sin" | "cos" | "tau" | "arcsin" => {
            let params = Params::new(need(p, "p")?, need(q, "q")?)?;
            if xs.is_empty() {
                return Err(Error::Domain("eval needs at least one --x value".into()));
            }
            for &x in xs {
                let v = match function {
                    "sin" => params.sin(x),
                    "cos" => params.cos(x),
                    "tau" => params.tau(x)?,
                    _ => params.arcsin(x)?,
                };
                push(x, v, eps_of(v));
            }
        }
        "am" | "sn" => {
            let params = Params::new(need(p, "p")?, need(q, "q")?)?;
            let ep = EllipticParams::new(params, need(k, "k")?)?;
            if xs.is_empty() {
                return Err(Error::Domain("eval needs at least one --x value".into()));
            }
            for &x in xs {
                let v = if function == "am" { ep.am(x) } else { ep.sn(x) };
                push(x, v, 1e-12 * (1.0 + v.abs()));
            }
        }
        "K" => {
            let params = Params::new(need(p, "p")?, need(q, "q")?)?;
            let kk = need(k, "k")?;
            let ep = EllipticParams::new(params, kk)?;
            let r = ep.k_complete();
            push(kk, r.value, r.err_est);
        }
        "tanh" => {
            let qv = need(q, "q")?;
            if xs.is_empty() {
                return Err(Error::Domain("eval needs at least one --x value".into()));
            }
            for &x in xs {
                let v = tanh_q(qv, x)?;
                push(x, v, eps_of(v));
            }
        }
        "arctau" => {
            let pv = need(p, "p")?;
            for &x in xs {
                let v = arctau_star(pv, x)?;
                push(x, v, eps_of(v));
            }
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown function `{other}` (expected sin, cos, tau, arcsin, am, K, sn, tanh, arctau)"
            )))
        }
    }

    Ok(Report {
        command: "eval",
        params: json!({ "function": function, "p": p, "q": q, "k": k }),
        columns: vec!["x", "value", "err_est"],
        rows,
        pass: None,
        exit_code: 0,
    })
}

fn constants_cmd(families: &[String], ps: &[f64], tol: f64) -> Result<Report, Error> {
    let mut rows = Vec::new();
    for name in families {
        let family: SeriesFamily = name.parse()?;
        let p_list: Vec<Option<f64>> = if family.needs_p() {
            if ps.is_empty() {
                return Err(Error::Domain(format!(
                    "family {} needs at least one --p value",
                    family.name()
                )));
            }
            ps.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for p in p_list {
            let r = constants::evaluate(family, p.unwrap_or(f64::NAN), tol)?;
            rows.push(vec![
                json!(family.name()),
                p.map(|v| json!(v)).unwrap_or(Value::Null),
                json!(r.value),
                json!(r.err_est),
                json!(family.representation()),
                json!(r.terms_used),
            ]);
        }
    }
    Ok(Report {
        command: "constants",
        params: json!({ "families": families, "p": ps, "tol": tol }),
        columns: vec!["name", "p", "value", "err_est", "representation", "terms_used"],
        rows,
        pass: None,
        exit_code: 0,
    })
}

fn verify_cmd(
    ids: &[String],
    ps: &[f64],
    points: usize,
    tol: Option<f64>,
) -> Result<Report, Error> {
    let mut spec = GridSpec {
        points_per_domain: points,
        tol,
        ..GridSpec::default()
    };
    if !ids.is_empty() {
        spec.ids = ids
            .iter()
            .map(|s| s.parse::<IdentityId>())
            .collect::<Result<Vec<_>, _>>()?;
    }
    if !ps.is_empty() {
        spec.p_values = ps.to_vec();
    }
    let reports = run_suite(&spec);
    let all_pass = reports.iter().all(|r| r.pass);
    let rows = reports
        .iter()
        .map(|r: &IdentityReport| {
            vec![
                json!(r.identity_id.name()),
                json!(r.grid.len()),
                json!(r.max_residual),
                json!(r.tol),
                json!(r.pass),
            ]
        })
        .collect();
    Ok(Report {
        command: "verify",
        params: json!({
            "ids": spec.ids.iter().map(|i| i.name()).collect::<Vec<_>>(),
            "p": spec.p_values,
            "points": points,
        }),
        columns: vec!["identity_id", "grid_size", "max_residual", "tol", "pass"],
        rows,
        pass: Some(all_pass),
        exit_code: if all_pass { 0 } else { 4 },
    })
}

fn pendulum_cmd(
    p: f64,
    lambda: f64,
    omega0: f64,
    t_end: f64,
    rel_tol: f64,
) -> Result<Report, Error> {
    let cfg = PendulumConfig::new(p, lambda, omega0)?;
    let path = pendulum_numeric(&cfg, t_end, rel_tol)?;
    let rows = path
        .iter()
        .map(|pt| {
            vec![
                json!(pt.t),
                json!(pt.theta),
                json!(pt.theta_dot),
                json!(pt.energy_residual),
            ]
        })
        .collect();
    Ok(Report {
        command: "pendulum",
        params: json!({
            "p": p, "lambda": lambda, "omega0": omega0, "k": cfg.k,
            "regime": format!("{:?}", cfg.regime()).to_lowercase(),
            "t_end": t_end, "rel_tol": rel_tol,
        }),
        columns: vec!["t", "theta", "theta_dot", "energy_residual"],
        rows,
        pass: None,
        exit_code: 0,
    })
}

fn eigen_cmd(
    p: f64,
    n: u32,
    length: f64,
    r_amp: f64,
    q_amp: f64,
    samples: usize,
) -> Result<Report, Error> {
    let p_star = p / (p - 1.0);
    let u = make_eigenpair(EigenKind::Dirichlet, p, p_star, n, length, r_amp)?;
    let v = make_eigenpair(EigenKind::Neumann, p, p_star, n, length, q_amp)?;
    let rep = product_eigen_check(p, n, length, r_amp, q_amp, samples)?;
    let pass = rep.zero_count == rep.expected_zeros;
    let rows = vec![vec![
        json!(u.lambda),
        json!(v.lambda),
        json!(rep.xi),
        json!(rep.closed_form_residual),
        json!(rep.equation_residual),
        json!(rep.zero_count),
        json!(rep.expected_zeros),
        json!(pass),
    ]];
    Ok(Report {
        command: "eigen",
        params: json!({
            "p": p, "q": p_star, "n": n, "L": length, "R": r_amp, "Q": q_amp,
            "samples": samples,
        }),
        columns: vec![
            "lambda",
            "mu",
            "xi",
            "closed_form_residual",
            "equation_residual",
            "zero_count",
            "expected_zeros",
            "pass",
        ],
        rows,
        pass: Some(pass),
        exit_code: if pass { 0 } else { 4 },
    })
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut doc = json!({
                "command": report.command,
                "params": report.params,
                "rows": report
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (c, v) in report.columns.iter().zip(row) {
                            obj.insert((*c).to_string(), v.clone());
                        }
                        Value::Object(obj)
                    })
                    .collect::<Vec<_>>(),
            });
            if let Some(pass) = report.pass {
                doc["pass"] = json!(pass);
            }
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = report.columns.join(",");
            s.push('\n');
            for row in &report.rows {
                let cells: Vec<String> = row.iter().map(csv_cell).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            s.push_str(&report.columns.join("\t"));
            s.push('\n');
            for row in &report.rows {
                let cells: Vec<String> = row.iter().map(text_cell).collect();
                s.push_str(&cells.join("\t"));
                s.push('\n');
            }
            if let Some(pass) = report.pass {
                s.push_str(if pass { "PASS\n" } else { "FAIL\n" });
            }
            s
        }
    }
}

/// Fixed 17-significant-digit scientific notation for floats in CSV.
fn csv_cell(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:.16e}"),
            _ => n.to_string(),
        },
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_cell(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:.12e}"),
            _ => n.to_string(),
        },
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
