//! The `subduce` command line.
//!
//! Exit status: 0 on success or a passed check, 1 on a failed check,
//! 2 on bad input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use subduce_core::chart::{fiber_independence_defect, subduced_finsler, tangency_defect, ChartFinsler};
use subduce_core::liealg::{cone_sample, so4, subduce_to_m};
use subduce_core::minksub::{lift_with_start, verify_submersion, SubducedNorm};
use subduce_core::norms::verify_minkowski;
use subduce_core::{LinearSurjection, NormSpec, SolverConfig, Vector};

use crate::figure::randers_figure;
use crate::format::{
    ChartJson, LiftSolutionJson, NormSpecJson, So4Dump, SolverConfigJson, SubducedValueJson, SubmersionReportJson,
    SurjectionJson, VerificationReportJson,
};
use crate::{load_json, to_json, Error};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Homogeneous lifts and subduced norms between normed vector spaces.
#[derive(Parser, Debug)]
#[command(name = "subduce", version)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Pass/fail tolerance for checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of random samples for sampled checks.
    #[arg(long, global = true, default_value_t = 500)]
    pub samples: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write results here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample-check that a norm is a Minkowski norm.
    VerifyNorm {
        #[arg(long)]
        norm: PathBuf,
    },
    /// Minimize the norm over the fiber of the surjection above `v`.
    Lift {
        #[arg(long)]
        norm: PathBuf,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        v: Vector,
        /// Solver settings, `{"tol": .., "max_iter": ..}`.
        #[arg(long)]
        solver: Option<PathBuf>,
        /// Initial kernel coordinates for the fiber search.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        start: Option<Vector>,
    },
    /// Evaluate the subduced norm, from a norm and surjection or from a chart family.
    Subduce {
        #[arg(long, required_unless_present = "chart", requires = "mu")]
        norm: Option<PathBuf>,
        #[arg(long, requires = "norm")]
        mu: Option<PathBuf>,
        #[arg(long, conflicts_with = "norm", requires = "x")]
        chart: Option<PathBuf>,
        /// Base point, with `--chart`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        x: Option<Vector>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        v: Vector,
        #[arg(long)]
        solver: Option<PathBuf>,
    },
    /// Check that a target norm is the one subduced through a surjection.
    VerifySubmersion {
        #[arg(long)]
        norm: PathBuf,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Check that a chart family's energy is constant along the fiber at `(x, y)`.
    Tangency {
        #[arg(long)]
        chart: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        x: Vector,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        y: Vector,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        v: Vector,
        /// Second fiber point for the independence check.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        y2: Option<Vector>,
    },
    /// Dump the so(4) basis, structure constants, Killing form and candidate norms.
    So4Demo,
    /// Sample the horizontal cone of an Ad(SO(3))-invariant norm on so(4).
    Cone {
        #[arg(long)]
        norm: PathBuf,
    },
    /// Plot data for the planar Randers example (always CSV).
    RandersFigure,
}

fn parse_vector(s: &str) -> Result<Vector, String> {
    let xs = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("`{}` is not a number", p.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    if xs.iter().any(|x| !x.is_finite()) {
        return Err("components must be finite".into());
    }
    Ok(Vector::from_vec(xs))
}

/// A CSV table.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: impl IntoIterator<Item = String>) {
        self.rows.push(row.into_iter().collect());
    }

    fn render(&self) -> Result<String, Error> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).map_err(Error::output)?;
        for row in &self.rows {
            w.write_record(row).map_err(Error::output)?;
        }
        let bytes = w.into_inner().map_err(Error::output)?;
        String::from_utf8(bytes).map_err(Error::output)
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn indexed(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| format!("{prefix}_{i}"))
}

fn padded(xs: Option<&[f64]>, n: usize) -> impl Iterator<Item = String> + '_ {
    (0..n).map(move |i| xs.and_then(|xs| xs.get(i)).map(|x| num(*x)).unwrap_or_default())
}

struct Outcome {
    text: String,
    passed: bool,
}

fn emit<T: Serialize>(
    format: Format,
    value: &T,
    table: impl FnOnce() -> Table,
    passed: bool,
) -> Result<Outcome, Error> {
    let text = match format {
        Format::Json => to_json(value)?,
        Format::Csv => table().render()?,
    };
    Ok(Outcome { text, passed })
}

fn load_norm(path: &Path) -> Result<NormSpec, Error> {
    NormSpec::try_from(&load_json::<NormSpecJson>(path)?)
}

fn load_surjection(path: &Path) -> Result<LinearSurjection, Error> {
    LinearSurjection::try_from(&load_json::<SurjectionJson>(path)?)
}

fn load_solver(path: Option<&PathBuf>) -> Result<SolverConfig, Error> {
    let cfg = match path {
        Some(p) => load_json::<SolverConfigJson>(p)?.into(),
        None => SolverConfig::default(),
    };
    if !(cfg.tol > 0.0) || cfg.max_iter == 0 {
        return Err(Error::Input("solver needs tol > 0 and max_iter > 0".into()));
    }
    Ok(cfg)
}

fn load_chart(path: &Path) -> Result<ChartFinsler, Error> {
    ChartFinsler::try_from(&load_json::<ChartJson>(path)?)
}

fn check_len(name: &str, v: &Vector, expected: usize) -> Result<(), Error> {
    if v.len() != expected {
        return Err(Error::Input(format!("--{name} has {} components, expected {expected}", v.len())));
    }
    Ok(())
}

fn verification_table(r: &VerificationReportJson, dim: usize) -> Table {
    let mut t = Table::new(
        [
            "passed",
            "min_hessian_eigenvalue",
            "worst_homogeneity_defect",
            "worst_triangle_defect",
            "worst_fundamental_defect",
            "samples_used",
        ]
        .map(String::from)
        .into_iter()
        .chain(indexed("witness", dim)),
    );
    t.push(
        [
            r.passed.to_string(),
            opt(r.min_hessian_eigenvalue),
            opt(r.worst_homogeneity_defect),
            opt(r.worst_triangle_defect),
            opt(r.worst_fundamental_defect),
            r.samples_used.to_string(),
        ]
        .into_iter()
        .chain(padded(r.failure_witness.as_deref(), dim)),
    );
    t
}

fn execute(command: &Command, c: &Common) -> Result<Outcome, Error> {
    match command {
        Command::VerifyNorm { norm } => {
            let spec = load_norm(norm)?;
            let report = VerificationReportJson::from(&verify_minkowski(&spec, c.samples, c.seed, c.tol));
            emit(c.format, &report, || verification_table(&report, spec.dim()), report.passed)
        }
        Command::Lift { norm, mu, v, solver, start } => {
            let spec = load_norm(norm)?;
            let surj = load_surjection(mu)?;
            check_len("v", v, surj.target_dim())?;
            let start = match start {
                Some(w) => {
                    check_len("start", w, surj.kernel_dim())?;
                    w.clone()
                }
                None => Vector::zeros(surj.kernel_dim()),
            };
            let sol =
                LiftSolutionJson::from(&lift_with_start(&spec, &surj, v, &load_solver(solver.as_ref())?, &start)?);
            let n = sol.point.len();
            emit(
                c.format,
                &sol,
                || {
                    let mut t = Table::new(
                        indexed("point", n)
                            .chain(["value", "residual", "iterations", "converged", "degenerate"].map(String::from)),
                    );
                    t.push(sol.point.iter().map(|x| num(*x)).chain([
                        num(sol.value),
                        opt(sol.residual),
                        sol.iterations.to_string(),
                        sol.converged.to_string(),
                        sol.degenerate.to_string(),
                    ]));
                    t
                },
                true,
            )
        }
        Command::Subduce { norm, mu, chart, x, v, solver } => {
            let cfg = load_solver(solver.as_ref())?;
            let value = match (norm, mu, chart, x) {
                (Some(norm), Some(mu), None, _) => {
                    let surj = load_surjection(mu)?;
                    check_len("v", v, surj.target_dim())?;
                    let sub = SubducedNorm { cfg, ..SubducedNorm::new(load_norm(norm)?, surj)? };
                    sub.lift(v)?.value
                }
                (None, None, Some(chart), Some(x)) => {
                    let cf = load_chart(chart)?;
                    check_len("x", x, cf.n_x)?;
                    check_len("v", v, cf.n_x)?;
                    if solver.is_some() {
                        return Err(Error::Input("--solver is not used with --chart".into()));
                    }
                    subduced_finsler(&cf, x, v, c.tol)?
                }
                _ => return Err(Error::Input("give either --norm and --mu, or --chart and --x".into())),
            };
            let out = SubducedValueJson { v: v.iter().copied().collect(), value };
            emit(
                c.format,
                &out,
                || {
                    let mut t = Table::new(indexed("v", v.len()).chain(["value".to_string()]));
                    t.push(out.v.iter().map(|x| num(*x)).chain([num(out.value)]));
                    t
                },
                true,
            )
        }
        Command::VerifySubmersion { norm, mu, target } => {
            let spec = load_norm(norm)?;
            let surj = load_surjection(mu)?;
            let target = load_norm(target)?;
            if target.dim() != surj.target_dim() {
                return Err(Error::Input(format!(
                    "target norm has dimension {}, surjection maps onto dimension {}",
                    target.dim(),
                    surj.target_dim()
                )));
            }
            let report =
                SubmersionReportJson::from(&verify_submersion(&spec, &surj, &target, c.samples, c.seed, c.tol));
            let dim = spec.dim();
            emit(
                c.format,
                &report,
                || {
                    let mut t = Table::new(
                        ["passed", "worst_value_mismatch", "worst_inequality_defect", "samples_used"]
                            .map(String::from)
                            .into_iter()
                            .chain(indexed("witness", dim)),
                    );
                    t.push(
                        [
                            report.passed.to_string(),
                            opt(report.worst_value_mismatch),
                            opt(report.worst_inequality_defect),
                            report.samples_used.to_string(),
                        ]
                        .into_iter()
                        .chain(padded(report.failure_witness.as_deref(), dim)),
                    );
                    t
                },
                report.passed,
            )
        }
        Command::Tangency { chart, x, y, v, y2 } => {
            let cf = load_chart(chart)?;
            check_len("x", x, cf.n_x)?;
            check_len("y", y, cf.n_y)?;
            check_len("v", v, cf.n_x)?;
            let defect = tangency_defect(&cf, x, y, v)?;
            let max = defect.amax();
            let mut passed = max <= c.tol;
            let independence = match y2 {
                Some(y2) if passed => {
                    check_len("y2", y2, cf.n_y)?;
                    let d = fiber_independence_defect(&cf, x, y, y2, v)?;
                    passed &= d <= c.tol;
                    Some(d)
                }
                _ => None,
            };
            let out = TangencyJson {
                tangency_defect: defect.iter().copied().collect(),
                max_defect: max,
                fiber_independence_defect: independence,
                tangent: passed,
            };
            emit(
                c.format,
                &out,
                || {
                    let mut t = Table::new(["component", "tangency_defect"]);
                    for (i, d) in out.tangency_defect.iter().enumerate() {
                        t.push([i.to_string(), num(*d)]);
                    }
                    t
                },
                passed,
            )
        }
        Command::So4Demo => {
            let dump = So4Dump::new(&so4());
            emit(
                c.format,
                &dump,
                || {
                    let mut t = Table::new(["c", "a", "b", "value"]);
                    for (ci, plane) in dump.constants.iter().enumerate() {
                        for (a, row) in plane.iter().enumerate() {
                            for (b, x) in row.iter().enumerate() {
                                t.push([ci.to_string(), a.to_string(), b.to_string(), num(*x)]);
                            }
                        }
                    }
                    t
                },
                true,
            )
        }
        Command::Cone { norm } => {
            let sub = subduce_to_m(&so4(), &load_norm(norm)?)?;
            let points: Vec<Vec<f64>> =
                cone_sample(&sub, c.samples, c.seed)?.into_iter().map(|p| p.iter().copied().collect()).collect();
            let dim = sub.split.sc.dim();
            let out = ConeJson { points };
            emit(
                c.format,
                &out,
                || {
                    let mut t = Table::new(indexed("w", dim));
                    for p in &out.points {
                        t.push(p.iter().map(|x| num(*x)));
                    }
                    t
                },
                true,
            )
        }
        Command::RandersFigure => {
            let mut t = Table::new(["series", "index", "v", "w"]);
            for p in randers_figure() {
                t.push([p.series.to_string(), p.index.to_string(), num(p.v), num(p.w)]);
            }
            Ok(Outcome { text: t.render()?, passed: true })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangencyJson {
    pub tangency_defect: Vec<f64>,
    pub max_defect: f64,
    pub fiber_independence_defect: Option<f64>,
    pub tangent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    pub points: Vec<Vec<f64>>,
}

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = execute(&args.command, &args.common).and_then(|o| {
        match &args.common.output {
            Some(path) => {
                fs::write(path, &o.text).map_err(|source| Error::Io { path: path.display().to_string(), source })?
            }
            None => out.write_all(o.text.as_bytes()).map_err(Error::output)?,
        }
        Ok(o)
    });
    match outcome {
        Ok(o) if o.passed => EXIT_OK,
        Ok(_) => EXIT_FAILED,
        Err(e @ Error::Core(subduce_core::Error::TangencyViolated { .. })) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILED
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
