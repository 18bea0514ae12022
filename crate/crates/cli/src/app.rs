//! Argument parsing and subcommand dispatch for the `nash-atlas` binary.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use nash_atlas_core::catalog;
use nash_atlas_core::expr::DomainBox;
use nash_atlas_core::report::Outcome;
use nash_atlas_core::simplicial::{erase_homeo, subdivide, Complex, Simplex};
use nash_atlas_core::weld::{weld_sequence, WeldStatus};
use serde_json::{json, Value};

use crate::checks::{self, expect, Job};
use crate::cloud::{emit_cloud, names};
use crate::formats::{parse_drill_spec, parse_orthants, parse_set, parse_simplices};
use crate::report::{Document, VerificationReport};
use crate::suite;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nash-atlas", version, about = "Numerical and exact checks of Nash manifold constructions")]
pub struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, env = "NASH_ATLAS_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Tolerance replacing the default of every check that runs.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write a CSV point cloud here (double, drill and sample).
    #[arg(long = "emit-cloud", global = true, value_name = "PATH")]
    pub emit_cloud: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The catalog of named Nash maps.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Nash doubles of the model bounded manifolds.
    Double {
        #[arg(long, value_enum)]
        model: Model,
        /// Run one check instead of all three.
        #[arg(long, value_enum)]
        check: Option<DoubleCheck>,
        /// Points in the emitted cloud.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Drillings along a center described by a spec file.
    Drill {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Run one check instead of all.
        #[arg(long, value_enum)]
        check: Option<DrillCheck>,
        /// Points in the emitted cloud.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Exact simplicial operations on a simplex file.
    Simplex {
        #[command(subcommand)]
        action: SimplexAction,
    },
    /// Welding a family of orthants by blow-ups of the origin.
    Weld {
        /// Comma-separated sign strings, e.g. `++,--`.
        #[arg(long)]
        orthants: String,
    },
    /// Rejection sampling of a semialgebraic set file.
    Sample {
        #[arg(long, value_name = "FILE")]
        set: PathBuf,
        /// Half-width of the sampling cube centred at the origin.
        #[arg(long, default_value_t = 2.0)]
        half_width: f64,
        #[arg(short = 'n', long, default_value_t = 500)]
        points: usize,
    },
    /// The full verification suite.
    Suite {
        /// Run every check (the default).
        #[arg(long)]
        all: bool,
        /// Only checks whose name starts with this prefix.
        #[arg(long, conflicts_with = "all")]
        only: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Names with the claim each map realizes.
    List,
    /// Verify one named map.
    Verify { name: String },
}

#[derive(Debug, Subcommand)]
pub enum SimplexAction {
    /// Erase the common facet of the two simplices in the file.
    Erase { file: PathBuf },
    /// Subdivide the simplex in the file along chosen facets.
    Subdivide {
        file: PathBuf,
        /// Facet indices; all facets when omitted.
        #[arg(long, value_delimiter = ',')]
        facets: Vec<usize>,
    },
    /// Order the top simplices of the complex in the file.
    Order { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Model {
    Interval,
    Halfspace,
    Disk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DoubleCheck {
    Fiber,
    Square,
    Onto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DrillCheck {
    Phi,
    Fiber,
    Localrep,
    Generators,
    Classical,
    Erase,
}

/// Failures that are not check failures: bad input or IO.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn input(e: impl std::fmt::Display) -> AppError {
    AppError::Input(e.to_string())
}

fn read(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path).map_err(|source| AppError::Io { path: path.into(), source })
}

fn write_cloud(path: &Path, header: &[String], points: &[Vec<f64>]) -> Result<(), AppError> {
    emit_cloud(path, header, points).map_err(|source| AppError::Io { path: path.into(), source })
}

/// What a subcommand produced: reports plus command-specific details.
struct Run {
    command: String,
    reports: Vec<VerificationReport>,
    details: Value,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(Some(run)) => finish(&cli, run),
        Ok(None) => EXIT_PASS,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn finish(cli: &Cli, run: Run) -> i32 {
    let doc = Document::new(&run.command, cli.seed, run.reports, run.details);
    let to_stdout = cli.json.as_deref() == Some(Path::new("-"));
    for r in &doc.checks {
        if to_stdout {
            eprintln!("{}", r.line());
        } else {
            println!("{}", r.line());
        }
    }
    if let Some(path) = &cli.json {
        let text = doc.to_json();
        let written = if to_stdout {
            std::io::stdout().write_all(text.as_bytes())
        } else {
            fs::write(path, text)
        };
        if let Err(source) = written {
            eprintln!("error: {}", AppError::Io { path: path.clone(), source });
            return EXIT_USAGE;
        }
    }
    if doc.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn execute(cli: &Cli) -> Result<Option<Run>, AppError> {
    let takes_cloud =
        matches!(cli.command, Command::Double { .. } | Command::Drill { .. } | Command::Sample { .. });
    if cli.emit_cloud.is_some() && !takes_cloud {
        return Err(input("--emit-cloud applies to double, drill and sample"));
    }
    let run = match &cli.command {
        Command::Catalog { action: CatalogAction::List } => {
            list_catalog()?;
            return Ok(None);
        }
        Command::Catalog { action: CatalogAction::Verify { name } } => verify_catalog(cli, name)?,
        Command::Double { model, check, points } => double(cli, *model, *check, *points)?,
        Command::Drill { spec, check, points } => drill(cli, spec, *check, *points)?,
        Command::Simplex { action } => simplex(cli, action)?,
        Command::Weld { orthants } => weld(cli, orthants)?,
        Command::Sample { set, half_width, points } => sample(cli, set, *half_width, *points)?,
        Command::Suite { only, .. } => {
            let jobs: Vec<Job> =
                suite::all_jobs().into_iter().filter(|j| only.as_ref().map_or(true, |p| j.name.starts_with(p.as_str()))).collect();
            if jobs.is_empty() {
                return Err(input("no check matches --only"));
            }
            Run { command: "suite".into(), reports: checks::run_jobs(&jobs, cli.seed, cli.tol), details: Value::Null }
        }
    };
    Ok(Some(run))
}

fn list_catalog() -> Result<(), AppError> {
    for name in catalog::NAMES {
        let m = catalog::make(name).map_err(input)?;
        println!("{name:<14} {}", m.summary);
    }
    Ok(())
}

fn verify_catalog(cli: &Cli, name: &str) -> Result<Run, AppError> {
    let Some(&name) = catalog::NAMES.iter().find(|n| **n == name) else {
        return Err(input(format!("unknown map {name}; known maps: {}", catalog::NAMES.join(", "))));
    };
    let jobs = checks::catalog::jobs_for(name);
    Ok(Run {
        command: format!("catalog verify {name}"),
        reports: checks::run_jobs(&jobs, cli.seed, cli.tol),
        details: Value::Null,
    })
}

fn double(cli: &Cli, model: Model, check: Option<DoubleCheck>, points: usize) -> Result<Run, AppError> {
    let (name, kind) = match model {
        Model::Interval => checks::doubles::MODELS[0],
        Model::Halfspace => checks::doubles::MODELS[1],
        Model::Disk => checks::doubles::MODELS[2],
    };
    let selected: Vec<&str> = match check {
        None => checks::doubles::CHECKS.to_vec(),
        Some(DoubleCheck::Fiber) => vec!["fiber"],
        Some(DoubleCheck::Square) => vec!["square"],
        Some(DoubleCheck::Onto) => vec!["onto"],
    };
    if let Some(path) = &cli.emit_cloud {
        let pts = checks::doubles::cloud(kind, points, cli.seed).map_err(|e| input(format!("{e:?}")))?;
        let dim = checks::doubles::model(kind).dim;
        let mut header = names("x", dim);
        header.push("t".into());
        write_cloud(path, &header, &pts)?;
    }
    let jobs: Vec<Job> = selected.iter().map(|c| checks::doubles::job(name, kind, c)).collect();
    Ok(Run {
        command: format!("double {name}"),
        reports: checks::run_jobs(&jobs, cli.seed, cli.tol),
        details: json!({ "model": nash_atlas_core::doubles::describe(kind) }),
    })
}

fn drill(cli: &Cli, spec: &Path, check: Option<DrillCheck>, points: usize) -> Result<Run, AppError> {
    let file = parse_drill_spec(&read(spec)?).map_err(input)?;
    let selected: Vec<&'static str> = match check {
        None => checks::drill::CHECKS.to_vec(),
        Some(c) => {
            let word = match c {
                DrillCheck::Phi => "phi",
                DrillCheck::Fiber => "fiber",
                DrillCheck::Localrep => "localrep",
                DrillCheck::Generators => "generators",
                DrillCheck::Classical => "classical",
                DrillCheck::Erase => "erase",
            };
            checks::drill::expand(word).expect("every value of --check expands").to_vec()
        }
    };
    if let Some(path) = &cli.emit_cloud {
        let s = &file.spec;
        let pts = if matches!(check, Some(DrillCheck::Fiber)) {
            checks::drill::fiber_cloud(s, points, cli.seed).map_err(|e| input(format!("{e:?}")))?
        } else {
            s.sample_points(points, cli.seed).map_err(input)?
        };
        let rows: Vec<Vec<f64>> = pts.into_iter().map(|p| p.base.into_iter().chain(p.dir).collect()).collect();
        let mut header = names("x", s.d);
        header.extend(names("w", s.d - s.e));
        write_cloud(path, &header, &rows)?;
    }
    let specs = Arc::new(vec![file.clone()]);
    let jobs: Vec<Job> = selected.iter().map(|c| checks::drill::job(c, specs.clone())).collect();
    Ok(Run {
        command: "drill".into(),
        reports: checks::run_jobs(&jobs, cli.seed, cli.tol),
        details: json!({ "ambient": file.spec.d, "center": file.spec.e, "generators": file.spec.k }),
    })
}

/// The citation of a suite check, so that one-off runs are labelled like
/// the suite.
fn citation(name: &str) -> &'static str {
    suite::all_jobs().into_iter().find(|j| j.name == name).map_or("", |j| j.citation)
}

fn one_job(cli: &Cli, command: String, name: &str, run: impl Fn(u64) -> checks::CheckResult + Send + Sync + 'static, details: Value) -> Run {
    let job = Job::new(name, citation(name), 0.0, move |seed, _| run(seed));
    Run { command, reports: vec![job.execute(cli.seed, cli.tol)], details }
}

fn simplices(path: &Path, want: Option<usize>) -> Result<Vec<Simplex>, AppError> {
    let s = parse_simplices(&read(path)?).map_err(input)?;
    match want {
        Some(n) if s.len() != n => Err(input(format!("{}: expected {n} simplices, found {}", path.display(), s.len()))),
        _ if s.is_empty() => Err(input(format!("{}: no simplices", path.display()))),
        _ => Ok(s),
    }
}

fn simplex(cli: &Cli, action: &SimplexAction) -> Result<Run, AppError> {
    Ok(match action {
        SimplexAction::Erase { file } => {
            let s = simplices(file, Some(2))?;
            let e = erase_homeo(&s[0], &s[1]).map_err(input)?;
            let details = json!({
                "sigma1": e.sigma1.to_string(),
                "sigma2": e.sigma2.to_string(),
                "tau": e.tau.to_string(),
            });
            let (a, b) = (s[0].clone(), s[1].clone());
            one_job(cli, "simplex erase".into(), "simplex.erase", move |seed| checks::simplex::erase_pair(&a, &b, seed), details)
        }
        SimplexAction::Subdivide { file, facets } => {
            let s = simplices(file, Some(1))?.remove(0);
            let facets = if facets.is_empty() { (0..s.vertices().len()).collect() } else { facets.clone() };
            let parts = subdivide(&s, &facets).map_err(input)?;
            let details = json!({ "facets": facets, "parts": parts.iter().map(|p| p.to_string()).collect::<Vec<_>>() });
            one_job(cli, "simplex subdivide".into(), "simplex.subdivide", move |_| checks::simplex::subdivide_one(&s, &facets), details)
        }
        SimplexAction::Order { file } => {
            let c = Complex::new(simplices(file, None)?).map_err(input)?;
            let details = match c.order_d_simplices() {
                Ok(order) => json!({ "order": order }),
                Err(e) => json!({ "error": e.to_string() }),
            };
            one_job(
                cli,
                "simplex order".into(),
                "simplex.order",
                move |_| checks::simplex::order_one(&c).map(|(_, o)| o),
                details,
            )
        }
    })
}

fn weld(cli: &Cli, orthants: &str) -> Result<Run, AppError> {
    let f = parse_orthants(orthants).map_err(input)?;
    let t = weld_sequence(&f);
    let details = json!({
        "orthants": f.to_string(),
        "components": checks::weld::components_as_signs(&f),
        "trace": t.counts,
        "pivots": t.pivots,
        "family": t.family.to_string(),
        "status": match t.status {
            WeldStatus::Connected => "connected",
            WeldStatus::Stalled => "stalled",
        },
    });
    let mut reports = Vec::new();
    let started = std::time::Instant::now();
    let consistency = checks::weld::trace_consistency(&f, &t);
    reports.push(VerificationReport::from_outcome(
        "weld.trace",
        citation("weld.trace_non_increasing"),
        cli.seed,
        consistency,
        started,
    ));
    if f.ell() <= checks::weld::ORACLE_MAX_ELL {
        let fam = f.clone();
        let job = Job::new("weld.components_oracle", citation("weld.components_oracle"), 0.0, move |_, _| {
            checks::weld::oracle_agreement(std::slice::from_ref(&fam))
        });
        reports.push(job.execute(cli.seed, cli.tol));
    }
    Ok(Run { command: "weld".into(), reports, details })
}

fn sample(cli: &Cli, path: &Path, half_width: f64, points: usize) -> Result<Run, AppError> {
    let set = parse_set(&read(path)?).map_err(input)?;
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(input("--half-width must be positive and finite"));
    }
    let started = std::time::Instant::now();
    let bx = DomainBox::cube(set.dim(), -half_width, half_width);
    let (cloud, accepted, rejected) = if points == 0 || set.is_syntactically_empty() {
        (Vec::new(), 0, 0)
    } else {
        match set.sample(&bx, points, cli.seed) {
            Ok(c) => (c.points, c.accepted, c.rejected),
            Err(nash_atlas_core::sets::SetError::EmptyAfterBudget { trials }) => (Vec::new(), 0, trials),
            Err(e) => return Err(input(e)),
        }
    };
    let mut out = Outcome::new(0.0);
    for p in &cloud {
        let inside = set.contains(p).map_err(input)?;
        expect(&mut out, inside, || format!("sampled point {p:?} is not in the set"));
    }
    if let Some(path) = &cli.emit_cloud {
        write_cloud(path, &names("x", set.dim()), &cloud)?;
    }
    let report = VerificationReport::from_outcome("sets.sample", "rejection samples lie in the set", cli.seed, out, started);
    Ok(Run {
        command: "sample".into(),
        reports: vec![report],
        details: json!({ "dim": set.dim(), "accepted": accepted, "rejected": rejected }),
    })
}

