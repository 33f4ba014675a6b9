// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use advpos::region::{
    boundary_curve, jll_nu_star, nu_l, nu_r, region_scan, root_y_r, theta_crit, Y_ROOT_TOL,
};
use advpos::sim::{run, SimulationConfig};
use advpos::verify::{run_suite, Suite};
use advpos::{build_m_trig, io as csvio, FullStepParams, SchemeKind};
use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use args::{parse_profile, Grid, KRange, UsageError};

/// Relative output paths are resolved against this directory when it is set.
const OUT_DIR_ENV: &str = "ADVPOS_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "advpos",
    version,
    about = "Positivity of theta-method advection discretizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// First row of M, its smallest entry and its row sum.
    Entries {
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        nu: f64,
        /// Print JSON with full precision instead of the short text form.
        #[arg(long)]
        json: bool,
    },
    /// Sign of min_j M_{1,j} over a (theta, nu) grid.
    Region {
        #[arg(long)]
        scheme: SchemeKind,
        /// One or more grid sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long, default_value = "0:1:101")]
        theta_grid: Grid,
        #[arg(long, default_value = "0.01:100:400:log")]
        nu_grid: Grid,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// nu_R and nu_L of the centered second-order scheme on m = 2k + 1 points.
    Boundary {
        /// `k` or `a:b`.
        #[arg(long, default_value = "1:6")]
        k: KRange,
        #[arg(long, default_value = "0.01:1:100")]
        theta_grid: Grid,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// y_R(k), theta_k and the CFL bounds at one theta.
    Roots {
        #[arg(long, default_value = "1:10")]
        k: KRange,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity, recursion, bound and threshold-table self checks.
    Verify {
        /// Restrict to the named suites; all run by default.
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        /// Scale one closed-form coefficient to check that the harness fails.
        #[arg(long)]
        perturb: Option<f64>,
    },
    /// Time-step the discretization and report positivity and error as JSON.
    Simulate {
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// sine, step, gauss, basis:<i> or samples:<v1>,<v2>,...
        #[arg(long, default_value = "sine")]
        profile: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Also write the trajectory as CSV.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Power-sum thresholds nu_*(p, q) for the centered second-order scheme.
    Jll {
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9")]
        p: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        q: Vec<u32>,
        #[arg(long, default_value_t = 100.0)]
        scan_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve(path: PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path,
    }
}

fn sink(out: Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            let path = resolve(path);
            let file =
                File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) {
        return Err(UsageError(format!("--{name} must be positive, got {v}")).into());
    }
    Ok(())
}

// Short decimal form: 12 decimals, trailing zeros dropped, round-off shown as 0.
fn short(v: f64) -> String {
    let s = format!("{:.12}", if v.abs() < 5e-13 { 0.0 } else { v });
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn cmd_entries(scheme: SchemeKind, m: usize, theta: f64, nu: f64, json: bool) -> Result<ExitCode> {
    let built = build_m_trig(&FullStepParams::new(scheme, m, theta, nu)?)?;
    let (min, at) = built.matrix.min_entry();
    let mut out = sink(None)?;
    if json {
        let v = serde_json::json!({
            "scheme": scheme,
            "m": m,
            "theta": theta,
            "nu": nu,
            "row": built.first_row(),
            "min_entry": min,
            "min_index": at,
            "row_sum": built.matrix.row_sum(),
            "nonneg": min >= -built.matrix.default_tolerance(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
    } else {
        let row: Vec<String> = built.first_row().iter().map(|&v| short(v)).collect();
        writeln!(out, "row: {}", row.join(" "))?;
        writeln!(out, "min: {} at j={at}", short(min))?;
        writeln!(out, "row_sum: {}", short(built.matrix.row_sum()))?;
        let verdict = if min >= -built.matrix.default_tolerance() {
            "yes"
        } else {
            "no"
        };
        writeln!(out, "nonneg: {verdict}")?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_region(
    scheme: SchemeKind,
    ms: &[usize],
    thetas: &Grid,
    nus: &Grid,
    tol: f64,
    out: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode> {
    if !(tol >= 0.0) {
        return Err(UsageError(format!("--tol must be non-negative, got {tol}")).into());
    }
    let (thetas, nus) = (thetas.values(), nus.values());
    let scans = ms
        .iter()
        .map(|&m| region_scan(scheme, m, &thetas, &nus, tol))
        .collect::<advpos::Result<Vec<_>>>()?;
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            let all: Vec<_> = scans
                .iter()
                .flat_map(|s| s.samples.iter().copied())
                .collect();
            csvio::write_region_csv(&mut w, &all)?;
        }
        Format::Json => writeln!(w, "{}", serde_json::to_string(&scans)?)?,
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_boundary(
    k: KRange,
    thetas: &Grid,
    out: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode> {
    let thetas = thetas.values();
    let curves = k
        .iter()
        .map(|k| boundary_curve(k, &thetas))
        .collect::<advpos::Result<Vec<_>>>()?;
    let mut w = sink(out)?;
    match format {
        Format::Csv => csvio::write_boundary_csv(&mut w, &curves)?,
        Format::Json => writeln!(w, "{}", serde_json::to_string(&curves)?)?,
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_roots(k: KRange, theta: f64, out: Option<PathBuf>) -> Result<ExitCode> {
    let mut w = sink(out)?;
    writeln!(w, "k,y_R,theta_k,theta,nu_R,nu_L")?;
    for k in k.iter() {
        writeln!(
            w,
            "{k},{},{},{},{},{}",
            csvio::fmt_f64(root_y_r(k, Y_ROOT_TOL)?),
            csvio::fmt_f64(theta_crit(k)?),
            csvio::fmt_f64(theta),
            csvio::fmt_f64(nu_r(k, theta)?),
            nu_l(k, theta)?,
        )?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(names: &[String], perturb: Option<f64>) -> Result<ExitCode> {
    let suites = if names.is_empty() {
        Suite::ALL.to_vec()
    } else {
        names
            .iter()
            .map(|n| n.parse::<Suite>())
            .collect::<advpos::Result<Vec<_>>>()?
    };
    let mut failed = 0;
    for suite in suites {
        let r = run_suite(suite, perturb)?;
        let tag = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {suite}: {} checks, {} failed",
            r.checks,
            r.failures.len()
        );
        for f in r.failures.iter().take(5) {
            println!("    {f}");
        }
        failed += (!r.passed()) as usize;
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    scheme: SchemeKind,
    m: usize,
    theta: f64,
    nu: f64,
    a: f64,
    steps: usize,
    profile: &str,
    tol: f64,
    trajectory: Option<PathBuf>,
) -> Result<ExitCode> {
    let config = SimulationConfig {
        kind: scheme,
        m,
        theta,
        a,
        nu,
        steps,
        profile: parse_profile(profile, m)?,
        record_trajectory: trajectory.is_some(),
    };
    let mut report = run(&config, tol)?;
    if let Some(path) = trajectory {
        let mut w = sink(Some(path))?;
        csvio::write_trajectory_csv(&mut w, report.trajectory.as_deref().unwrap_or_default())?;
        w.flush()?;
        report.trajectory = None;
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_jll(
    m: usize,
    theta: f64,
    ps: &[u32],
    qs: &[u32],
    scan_max: f64,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    positive("scan-max", scan_max)?;
    let mut w = sink(out)?;
    writeln!(w, "p,q,nu_star")?;
    for &q in qs {
        for &p in ps {
            let v = jll_nu_star(m, theta, p, q, scan_max)?;
            writeln!(w, "{p},{q},{}", csvio::fmt_f64(v))?;
        }
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Entries {
            scheme,
            m,
            theta,
            nu,
            json,
        } => cmd_entries(scheme, m, theta, nu, json),
        Command::Region {
            scheme,
            m,
            theta_grid,
            nu_grid,
            tol,
            out,
            format,
        } => cmd_region(scheme, &m, &theta_grid, &nu_grid, tol, out, format),
        Command::Boundary {
            k,
            theta_grid,
            out,
            format,
        } => cmd_boundary(k, &theta_grid, out, format),
        Command::Roots { k, theta, out } => cmd_roots(k, theta, out),
        Command::Verify { suite, perturb } => cmd_verify(&suite, perturb),
        Command::Simulate {
            scheme,
            m,
            theta,
            nu,
            a,
            steps,
            profile,
            tol,
            trajectory,
        } => cmd_simulate(scheme, m, theta, nu, a, steps, &profile, tol, trajectory),
        Command::Jll {
            m,
            theta,
            p,
            q,
            scan_max,
            out,
        } => cmd_jll(m, theta, &p, &q, scan_max, out),
    }
}

fn is_usage(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.is::<UsageError>()
            || matches!(
                e.downcast_ref::<advpos::Error>(),
                Some(
                    advpos::Error::InvalidArgument(_)
                        | advpos::Error::UnsupportedScheme(_)
                        | advpos::Error::OutOfRange(_)
                )
            )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_usage(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
