//! The `ffc` command pipeline.
//!
//! Exit status: 0 success, 1 invalid input, 2 numeric failure, 3 a
//! verification outside tolerance.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::json;

use crate::calc::{default_step, f_derivative, f_integral};
use crate::curve::{
    build_staircase, gamma_dimension, generate_koch, generate_segment, FractalCurve, StaircaseTable,
};
use crate::error::{Error, Result};
use crate::ffde::{
    bvp_residual, example2_crisp_closed_form, solve, solve_second_order_bvp,
    verify_against_closed_form, SecondOrderFuzzyBvp,
};
use crate::fuzzy_calc::DiffCase;
use crate::io::{
    builtin, read_solution_csv, read_to_string, write_bvp_csv, write_curve_csv, write_solution_csv,
    write_staircase_csv, CurveSpec, Problem, ProblemSpec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

pub const MAX_R_POINTS: usize = 10_001;
pub const MAX_J_STEPS: usize = 1 << 20;

/// Tolerance of the weight identities `q(left) = (1, 0)`, `q(right) = (0, 1)`.
const WEIGHT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Write curve vertices as CSV.
    Curve,
    /// Estimate the γ-dimension.
    Dim,
    /// Write the staircase table as CSV.
    Staircase,
    /// F^α-integral of a test function of J.
    Integrate,
    /// F^α-derivative of a test function of J.
    Differentiate,
    /// Solve a built-in or JSON-specified problem.
    Solve,
    /// Compare a solution with its closed form.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Koch,
    Segment,
}

/// Test functions `g(J)` with known derivative and antiderivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestFunction {
    One,
    J,
    J2,
    Exp,
}

impl TestFunction {
    pub fn eval(self, j: f64) -> f64 {
        match self {
            TestFunction::One => 1.0,
            TestFunction::J => j,
            TestFunction::J2 => j * j,
            TestFunction::Exp => j.exp(),
        }
    }

    pub fn derivative(self, j: f64) -> f64 {
        match self {
            TestFunction::One => 0.0,
            TestFunction::J => 1.0,
            TestFunction::J2 => 2.0 * j,
            TestFunction::Exp => j.exp(),
        }
    }

    pub fn antiderivative(self, j: f64) -> f64 {
        match self {
            TestFunction::One => j,
            TestFunction::J => 0.5 * j * j,
            TestFunction::J2 => j * j * j / 3.0,
            TestFunction::Exp => j.exp(),
        }
    }
}

fn parse_case(s: &str) -> std::result::Result<DiffCase, String> {
    s.parse::<DiffCase>().map_err(|e| e.to_string())
}

fn parse_bounded(s: &str, lo: usize, hi: usize) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (lo..=hi).contains(&n) {
        Ok(n)
    } else {
        Err(format!("{n} is outside {lo}..={hi}"))
    }
}

fn parse_r_points(s: &str) -> std::result::Result<usize, String> {
    parse_bounded(s, 2, MAX_R_POINTS)
}

fn parse_j_steps(s: &str) -> std::result::Result<usize, String> {
    parse_bounded(s, 16, MAX_J_STEPS)
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "ffc",
    version,
    about = "Fractal calculus and fractal fuzzy differential equations"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Built-in curve, used when no --spec is given.
    #[arg(long, value_enum, default_value_t = CurveKind::Koch)]
    pub curve: CurveKind,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(0..=20))]
    pub level: u32,
    /// Order α; defaults to the estimated γ-dimension.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_parser = parse_case)]
    pub case: Option<DiffCase>,
    /// example1 or example2.
    #[arg(long)]
    pub builtin: Option<String>,
    /// JSON curve spec (curve commands) or problem spec (solve, verify).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = parse_r_points)]
    pub r_points: Option<usize>,
    #[arg(long, value_parser = parse_j_steps)]
    pub j_steps: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = TestFunction::J)]
    pub function: TestFunction,
    /// Curve parameter for differentiate.
    #[arg(long)]
    pub at: Option<f64>,
    /// Lower integration limit in curve parameters.
    #[arg(long)]
    pub a: Option<f64>,
    /// Upper integration limit in curve parameters.
    #[arg(long)]
    pub b: Option<f64>,
    /// Solution CSV to verify instead of solving afresh.
    #[arg(long)]
    pub solution: Option<PathBuf>,
}

enum Outcome {
    Done,
    OutOfTolerance,
}

/// Runs one command and returns the process exit status.
pub fn run(config: &RunConfig) -> i32 {
    let result = configure_threads().and_then(|_| execute(config));
    match result {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::OutOfTolerance) => EXIT_TOLERANCE,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numeric() {
                EXIT_NUMERIC
            } else {
                EXIT_INPUT
            }
        }
    }
}

/// Applies `FFC_THREADS` to the global rayon pool.
fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("FFC_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            Error::Validation(format!(
                "FFC_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    #[cfg(feature = "parallel")]
    {
        // A pool that is already running keeps its size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    if let Some(tol) = cfg.tol {
        if !(tol > 0.0) {
            return Err(Error::Validation(format!(
                "--tol must be positive, got {tol}"
            )));
        }
    }
    match cfg.command {
        Command::Curve => {
            let curve = load_curve(cfg)?;
            write_artifact(cfg, |w| write_curve_csv(w, &curve))?;
            report(
                cfg,
                json!({"vertices": curve.len(), "level": curve.level(), "dim": curve.dim()}),
            );
            Ok(Outcome::Done)
        }
        Command::Dim => {
            let curve = load_curve(cfg)?;
            let (a, b) = curve.domain();
            let estimate = gamma_dimension(&curve, a, b, cfg.tol.unwrap_or(1e-6))?;
            print_json(
                cfg,
                json!({"level": curve.level(), "vertices": curve.len(), "gamma_dimension": estimate}),
            )?;
            Ok(Outcome::Done)
        }
        Command::Staircase => {
            let (curve, table) = load_staircase(cfg)?;
            write_artifact(cfg, |w| write_staircase_csv(w, &table))?;
            report(
                cfg,
                json!({"alpha": table.alpha(), "nodes": table.us().len(), "level": curve.level()}),
            );
            Ok(Outcome::Done)
        }
        Command::Integrate => {
            let (curve, table) = load_staircase(cfg)?;
            let (lo, hi) = curve.domain();
            let (a, b) = (cfg.a.unwrap_or(lo), cfg.b.unwrap_or(hi));
            let g = cfg.function;
            let res = f_integral(
                |u| g.eval(table.j_at(u).unwrap_or(f64::NAN)),
                &curve,
                &table,
                a,
                b,
            )?;
            let exact = g.antiderivative(table.j_at(b)?) - g.antiderivative(table.j_at(a)?);
            if let Some(w) = &res.warning {
                eprintln!("warning: {w}");
            }
            print_json(
                cfg,
                json!({"alpha": table.alpha(), "a": a, "b": b, "integral": res, "exact": exact}),
            )?;
            Ok(Outcome::Done)
        }
        Command::Differentiate => {
            let (_, table) = load_staircase(cfg)?;
            let u = cfg
                .at
                .ok_or_else(|| Error::Validation("differentiate needs --at".into()))?;
            let h = default_step(&table, u);
            let g = cfg.function;
            let d = f_derivative(|x| g.eval(table.j_at(x).unwrap_or(f64::NAN)), &table, u, h)?;
            let j = table.j_at(u)?;
            print_json(
                cfg,
                json!({"u": u, "J": j, "h": h, "derivative": d, "exact": g.derivative(j)}),
            )?;
            Ok(Outcome::Done)
        }
        Command::Solve => match load_problem(cfg)? {
            Problem::FirstOrder { problem, .. } => {
                let sol = solve(&problem)?;
                write_artifact(cfg, |w| write_solution_csv(w, &sol))?;
                for w in &sol.warnings {
                    eprintln!("warning: {w}");
                }
                report(
                    cfg,
                    json!({"case": sol.case.label(), "nodes": sol.nodes(), "horizon": sol.horizon()}),
                );
                Ok(Outcome::Done)
            }
            Problem::SecondOrder(bvp) => {
                let sol = solve_second_order_bvp(&bvp)?;
                write_artifact(cfg, |w| write_bvp_csv(w, &sol))?;
                report(
                    cfg,
                    json!({"nodes": sol.js.len(), "initial_slope": sol.initial_slope}),
                );
                Ok(Outcome::Done)
            }
        },
        Command::Verify => verify(cfg),
    }
}

fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tol.unwrap_or(1e-6);
    match load_problem(cfg)? {
        Problem::FirstOrder { problem, closed } => {
            let closed = closed.ok_or_else(|| {
                Error::Validation("this problem has no closed form to verify against".into())
            })?;
            let sol = match &cfg.solution {
                Some(path) => read_solution_csv(read_to_string(path)?.as_bytes(), problem.case)?,
                None => solve(&problem)?,
            };
            let rep = verify_against_closed_form(&sol, closed, tol, true);
            print_json(
                cfg,
                json!({"case": sol.case.label(), "report": rep, "horizon": sol.horizon()}),
            )?;
            Ok(if rep.passed {
                Outcome::Done
            } else {
                Outcome::OutOfTolerance
            })
        }
        Problem::SecondOrder(bvp) => {
            if !is_example2(cfg) {
                return Err(Error::Validation(
                    "this problem has no closed form to verify against".into(),
                ));
            }
            let sol = solve_second_order_bvp(&bvp)?;
            let crisp_err = sol
                .js
                .iter()
                .zip(&sol.crisp)
                .map(|(&j, &x)| (x - example2_crisp_closed_form(j)).abs())
                .fold(0.0, f64::max);
            let (q0, q1) = (sol.weights[0], sol.weights[sol.weights.len() - 1]);
            let weight_err = [q0.0 - 1.0, q0.1, q1.0, q1.1 - 1.0]
                .iter()
                .fold(0.0f64, |m, e| m.max(e.abs()));
            let residual = bvp_residual(&bvp, &sol);
            let passed = crisp_err <= tol && weight_err <= WEIGHT_TOL;
            print_json(
                cfg,
                json!({
                    "crisp_max_abs": crisp_err,
                    "weight_identity_max_abs": weight_err,
                    "residual_max_abs": residual,
                    "tol": tol,
                    "passed": passed,
                }),
            )?;
            Ok(if passed {
                Outcome::Done
            } else {
                Outcome::OutOfTolerance
            })
        }
    }
}

fn is_example2(cfg: &RunConfig) -> bool {
    cfg.builtin.as_deref() == Some("example2")
        || cfg
            .spec
            .as_ref()
            .and_then(|p| read_to_string(p).ok())
            .and_then(|t| ProblemSpec::parse(&t).ok())
            .is_some_and(
                |s| matches!(&s.rhs, crate::io::RhsSpec::Builtin { name } if name == "example2"),
            )
}

fn load_curve(cfg: &RunConfig) -> Result<FractalCurve> {
    match &cfg.spec {
        Some(path) => {
            let text = read_to_string(path)?;
            let spec: CurveSpec = serde_json::from_str(&text)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            spec.build()
        }
        None => match cfg.curve {
            CurveKind::Koch => generate_koch(cfg.level),
            CurveKind::Segment => generate_segment(cfg.level),
        },
    }
}

fn load_staircase(cfg: &RunConfig) -> Result<(FractalCurve, StaircaseTable)> {
    let curve = load_curve(cfg)?;
    let (a, b) = curve.domain();
    let alpha = match cfg.alpha {
        Some(alpha) => alpha,
        None => gamma_dimension(&curve, a, b, cfg.tol.unwrap_or(1e-6))?,
    };
    let table = build_staircase(&curve, alpha, a)?;
    Ok((curve, table))
}

fn load_problem(cfg: &RunConfig) -> Result<Problem> {
    let mut problem = match (&cfg.builtin, &cfg.spec) {
        (Some(_), Some(_)) => {
            return Err(Error::Validation(
                "give either --builtin or --spec, not both".into(),
            ))
        }
        (Some(name), None) => builtin(name, cfg.case)?,
        (None, Some(path)) => {
            let text = read_to_string(path)?;
            let mut spec = ProblemSpec::parse(&text)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            if cfg.case.is_some() {
                spec.case = cfg.case;
            }
            spec.resolve()?
        }
        (None, None) => return Err(Error::Validation("need --builtin or --spec".into())),
    };
    match &mut problem {
        Problem::FirstOrder { problem, .. } => {
            if let Some(n) = cfg.r_points {
                problem.r_points = n;
            }
            if let Some(n) = cfg.j_steps {
                problem.j_steps = n;
            }
        }
        Problem::SecondOrder(SecondOrderFuzzyBvp { steps, .. }) => {
            if let Some(n) = cfg.j_steps {
                *steps = n;
            }
        }
    }
    Ok(problem)
}

fn write_artifact(cfg: &RunConfig, emit: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            emit(&mut w)?;
            w.flush()
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock)
        }
    }
}

/// Summary of an artifact-producing command: stdout when the artifact went
/// to a file, stderr otherwise.
fn report(cfg: &RunConfig, value: serde_json::Value) {
    if cfg.out.is_some() {
        println!("{value}");
    } else {
        eprintln!("{value}");
    }
}

fn print_json(cfg: &RunConfig, value: serde_json::Value) -> Result<()> {
    let text =
        serde_json::to_string_pretty(&value).map_err(|e| Error::Validation(e.to_string()))?;
    write_artifact(cfg, |w| {
        writeln!(w, "{text}").map_err(|e| Error::Validation(e.to_string()))
    })
}
