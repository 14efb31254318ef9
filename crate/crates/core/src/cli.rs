//! Command dispatch for the `fde` binary.
//!
//! Exit codes: 0 pass or converged, 2 a condition fails, 3 the solver
//! diverged, 4 an error occurred.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{emit_example, ExampleId, ExampleParams};
use crate::error::{Error, Result};
use crate::lazer_leach::{certify, DEFAULT_GRID};
use crate::problem::{parse_problem, ProblemSpec};
use crate::resonance::analyze;
use crate::solver::{solve, solve_all, verify_pointwise, SolveConfig};
use crate::trigpoly::TrigPoly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONDITION: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
pub const EXIT_ERROR: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "fde", version, about = "Resonance analysis, Lazer-Leach checks and periodic solutions of functional-differential equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Problem JSON file, or the id of a built-in example.
    pub problem: String,
    /// Truncation order.
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Sphere samples for certificates and seeding.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resonant set, kernel bases and the linear hypotheses.
    Analyze(Common),
    /// Sampled certificates, degree and the classical margin.
    CheckLl(Common),
    /// Periodic solution by harmonic balance.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Report every distinct converged solution instead of the first.
        #[arg(long)]
        all: bool,
    },
    /// Pointwise residual of a stored solution.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Solution JSON: a trigonometric polynomial, or a solve report.
        solution: PathBuf,
    },
    /// Print a built-in problem.
    Example {
        id: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Output text and exit code of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

fn load_problem(spec: &str) -> Result<ProblemSpec> {
    let path = Path::new(spec);
    if path.exists() {
        return parse_problem(&std::fs::read_to_string(path)?);
    }
    match spec.parse::<ExampleId>() {
        Ok(id) => emit_example(id, ExampleParams::default()),
        Err(_) => Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{spec}: no such file or example"),
        ))),
    }
}

fn json_only(c: &Common, what: &str) -> Result<()> {
    if c.format == Format::Csv {
        return Err(Error::Unsupported(format!("{what} reports are JSON only")));
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn solve_config(prob: &ProblemSpec, c: &Common) -> SolveConfig {
    let mut cfg = prob.solve.clone().unwrap_or_default();
    if let Some(k) = c.kmax {
        cfg.kmax = k;
    }
    if let Some(t) = c.tol {
        cfg.tol_residual = t;
    }
    if let Some(s) = c.samples {
        cfg.seed_samples = s;
    }
    cfg
}

fn read_solution(path: &Path) -> Result<TrigPoly> {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let poly = v.get("u").cloned().unwrap_or(v);
    Ok(serde_json::from_value(poly)?)
}

fn dispatch(cmd: &Command) -> Result<(Outcome, Option<PathBuf>)> {
    match cmd {
        Command::Analyze(c) => {
            json_only(c, "analysis")?;
            let prob = load_problem(&c.problem)?;
            let report = analyze(&prob)?;
            let ok = report.conditions.as_ref().is_some_and(|x| x.all());
            let code = if ok { EXIT_OK } else { EXIT_CONDITION };
            Ok((Outcome { code, text: pretty(&report.to_json()) }, c.out.clone()))
        }
        Command::CheckLl(c) => {
            json_only(c, "certificate")?;
            let prob = load_problem(&c.problem)?;
            let report = analyze(&prob)?;
            let ll = certify(&prob, &report, c.samples.unwrap_or(64), DEFAULT_GRID)?;
            let linear_ok = report.conditions.as_ref().is_some_and(|x| x.all());
            let code = if ll.pass() && linear_ok { EXIT_OK } else { EXIT_CONDITION };
            let mut doc = ll.to_json();
            doc["linear"] = serde_json::json!({
                "K": report.resonant,
                "nu": report.nu(),
                "all_pass": linear_ok,
            });
            Ok((Outcome { code, text: pretty(&doc) }, c.out.clone()))
        }
        Command::Solve { common: c, all: true } => {
            json_only(c, "multi-solution")?;
            let prob = load_problem(&c.problem)?;
            let report = analyze(&prob)?;
            let found = solve_all(&prob, &report, &solve_config(&prob, c))?;
            let code = if found.is_empty() { EXIT_DIVERGED } else { EXIT_OK };
            let doc = serde_json::json!({"solutions": found.iter().map(|r| r.to_json()).collect::<Vec<_>>()});
            Ok((Outcome { code, text: pretty(&doc) }, c.out.clone()))
        }
        Command::Solve { common: c, all: false } => {
            let prob = load_problem(&c.problem)?;
            let report = analyze(&prob)?;
            let cfg = solve_config(&prob, c);
            let res = solve(&prob, &report, &cfg)?;
            let code = if res.converged { EXIT_OK } else { EXIT_DIVERGED };
            let text = match c.format {
                Format::Json => pretty(&res.to_json()),
                Format::Csv => res.u.to_csv(8 * cfg.kmax)?,
            };
            Ok((Outcome { code, text }, c.out.clone()))
        }
        Command::Verify { common: c, solution } => {
            json_only(c, "verification")?;
            let prob = load_problem(&c.problem)?;
            let u = read_solution(solution)?;
            let m = (8 * u.kmax()).max(64);
            let r = verify_pointwise(&prob, &u, m)?;
            let tol = c.tol.unwrap_or(1e-8);
            let pass = r < tol;
            let doc = serde_json::json!({"pointwise_residual": r, "grid": m, "tol": tol, "pass": pass});
            let code = if pass { EXIT_OK } else { EXIT_CONDITION };
            Ok((Outcome { code, text: pretty(&doc) }, c.out.clone()))
        }
        Command::Example { id, m, c, out } => {
            let id: ExampleId = id.parse()?;
            let prob = emit_example(id, ExampleParams { m: *m, c: *c })?;
            Ok((Outcome { code: EXIT_OK, text: prob.to_json() + "\n" }, out.clone()))
        }
    }
}

/// Runs one command. With `--out` the report goes to the file and the
/// returned text is empty.
pub fn run_command(cli: &Cli) -> Outcome {
    let result = dispatch(&cli.command).and_then(|(outcome, out)| match out {
        Some(path) => {
            std::fs::write(&path, &outcome.text)?;
            Ok(Outcome { code: outcome.code, text: String::new() })
        }
        None => Ok(outcome),
    });
    match result {
        Ok(o) => o,
        Err(e) => Outcome {
            code: EXIT_ERROR,
            text: format!("error: {e}\n"),
        },
    }
}
