//! `heiscone`: trace geodesics, run validation suites, connect cone points.
//!
//! Exit codes: 0 success, 1 bad input or I/O (and `validate` with a failing
//! summary), 2 domain breach during `trace`, 3 shooting non-convergence.

mod trace;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use heiscone::analysis::{connect_shooting, suites, ShootingError, SuiteConfig, ValidationReport};
use heiscone::cone::ConePoint;
use heiscone::GeomError;
use serde_json::json;
use thiserror::Error;

use crate::trace::{build_trace, Method, Space, TraceFormat, TraceRequest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid input: {0}")]
    Geom(#[from] GeomError),

    #[error("integration failed: {0}")]
    Numeric(#[from] heiscone::numeric::NumericError),

    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("{0}")]
    Shooting(ShootingError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Shooting(ShootingError::NoConvergence { .. } | ShootingError::Unreachable) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "heiscone", version, about = "Geodesics of the Sasakian Heisenberg group and its Kähler cone")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Structures,
    Geodesics,
    Completeness,
    Shooting,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a unit-speed geodesic to CSV or JSON.
    Trace {
        #[arg(long, value_enum)]
        space: Space,
        /// Base point: `x,y,t` or `x,y,t,r`.
        #[arg(long, allow_hyphen_values = true)]
        base: Coords,
        /// Initial frame velocity: `f,g,h` or `f,g,h,k`.
        #[arg(long, allow_hyphen_values = true)]
        dir: Coords,
        /// Arc-length range `a:b` with `a < b`.
        #[arg(long = "s", allow_hyphen_values = true, value_parser = parse_range)]
        s: (f64, f64),
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
        #[arg(long, value_enum, default_value = "csv")]
        format: TraceFormat,
        /// RK4 step size.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Rescale `--dir` to unit length instead of rejecting it.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a validation suite and emit its report.
    Validate {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random points for the structure identities.
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// Random initial conditions per case, half-plane geodesics and shooting pairs.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a cone geodesic from P to Q by shooting.
    Connect {
        #[arg(allow_hyphen_values = true)]
        p: Coords,
        #[arg(allow_hyphen_values = true)]
        q: Coords,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
    },
}

/// Comma-separated coordinates, e.g. `0,0,1.5,2`.
#[derive(Debug, Clone, PartialEq)]
struct Coords(Vec<f64>);

impl std::str::FromStr for Coords {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<_, _>>()
            .map(Coords)
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got `{s}`"))?;
    let a = a.trim().parse::<f64>().map_err(|e| format!("`{a}`: {e}"))?;
    let b = b.trim().parse::<f64>().map_err(|e| format!("`{b}`: {e}"))?;
    Ok((a, b))
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|source| CliError::Io { path: path.display().to_string(), source })
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn cone_point(v: &[f64], name: &str) -> Result<ConePoint, CliError> {
    match *v {
        [x, y, t, r] => Ok(ConePoint::checked(x, y, t, r)?),
        _ => Err(CliError::Input(format!("{name} needs 4 components x,y,t,r, got {}", v.len()))),
    }
}

fn report_text(rep: &ValidationReport) -> String {
    let mut s = String::new();
    for c in &rep.checks {
        let res = c.residual.map_or("null".to_string(), |r| format!("{r:e}"));
        s.push_str(&format!(
            "{} {} residual={} tolerance={:e}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            res,
            c.tolerance
        ));
    }
    for n in &rep.notes {
        s.push_str(&format!("# {n}\n"));
    }
    s.push_str(&format!("summary: {}\n", if rep.passed() { "pass" } else { "fail" }));
    s
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Command::Trace { space, base, dir, s, n, method, format, step, normalize, out } => {
            let req =
                TraceRequest { space, base: base.0, dir: dir.0, s_start: s.0, s_end: s.1, n, method, step, normalize };
            let table = build_trace(&req)?;
            let body = match format {
                TraceFormat::Csv => table.to_csv(),
                TraceFormat::Json => table.to_json(),
            };
            emit(out.as_ref(), &body)?;
            if let Some(b) = table.breach {
                eprintln!("domain breach at s = {} ({})", b.s, b.source);
                return Ok(2);
            }
            Ok(0)
        }
        Command::Validate { suite, seed, points, samples, format, out } => {
            let cfg = SuiteConfig { seed, points, samples };
            let rep = match suite {
                Suite::Structures => suites::structures(cfg),
                Suite::Geodesics => suites::geodesics(cfg)?,
                Suite::Completeness => suites::completeness(cfg)?,
                Suite::Shooting => suites::shooting(cfg)?,
                Suite::All => suites::all(cfg)?,
            };
            let body = match format {
                ReportFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&rep).expect("report serializes");
                    s.push('\n');
                    s
                }
                ReportFormat::Text => report_text(&rep),
            };
            emit(out.as_ref(), &body)?;
            Ok(if rep.passed() { 0 } else { 1 })
        }
        Command::Connect { p, q, tol, max_iter } => {
            let (p, q) = (cone_point(&p.0, "P")?, cone_point(&q.0, "Q")?);
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(CliError::Input(format!("--tol must be a non-negative number, got {tol}")));
            }
            match connect_shooting(p, q, max_iter, tol) {
                Ok(sol) => {
                    let g = &sol.geodesic;
                    let body = json!({
                        "converged": true,
                        "case": g.case_name(),
                        "c1": g.c1,
                        "c3": g.c3,
                        "C": [g.big_c.re, g.big_c.im],
                        "phi0": g.phi0,
                        "s_star": sol.s_star,
                        "direction": sol.direction,
                        "residual": sol.residual,
                        "iterations": sol.iterations,
                        "geodesic": g,
                    });
                    emit(None, &format!("{}\n", serde_json::to_string_pretty(&body).expect("serializes")))?;
                    Ok(0)
                }
                Err(ShootingError::NoConvergence { best, residual, iterations }) => {
                    let body = json!({
                        "converged": false,
                        "best_residual": residual,
                        "iterations": iterations,
                        "best": best,
                    });
                    emit(None, &format!("{}\n", serde_json::to_string_pretty(&body).expect("serializes")))?;
                    eprintln!("no convergence to tol {tol:e}; best endpoint residual {residual:e}");
                    Ok(3)
                }
                Err(ShootingError::Geom(e)) => Err(e.into()),
                Err(ShootingError::Degenerate) => Err(CliError::Input(ShootingError::Degenerate.to_string())),
                Err(e) => Err(CliError::Shooting(e)),
            }
        }
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which is reserved for breaches
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
