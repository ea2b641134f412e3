//! The `sublin` command line: compute bodies, run verification suites and
//! experiments, write JSON reports and SVG figures.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 unbounded result.

mod experiments;
mod report;
mod suites;
mod svg;

pub use experiments::*;
pub use report::*;
pub use suites::*;
pub use svg::*;

use crate::distributions::{ConvexShape, WeightedSample};
use crate::error::{Error, Result};
use crate::geometry::{body_from_support, BodyEstimate, DirectionGrid, Polygon2, SupportField};
use crate::risk::ExpectationSpec;
use crate::transforms::{depth_region, floating_like_body, Source};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNBOUNDED: i32 = 3;

/// Parameters shared by suites and experiments; `None` means the
/// suite's own default.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub seed: u64,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub alpha: Option<f64>,
    pub tau: Option<f64>,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub m: Option<u32>,
    pub count: Option<usize>,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub shape: Option<ConvexShape>,
}

#[derive(Parser, Debug)]
#[command(name = "sublin", version, about = "Convex bodies generated by sublinear expectations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compute the body of an expectation for a shape or weighted sample.
    Body {
        /// Shape or sample JSON file.
        source: PathBuf,
        /// Expectation JSON file or inline JSON; built from --alpha/--tau/--p/--a/--m when omitted.
        spec: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Compute the depth-trimmed region at level --alpha.
    Depth {
        source: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run a verification suite: duals, axioms, inclusion, bob, metronoid,
    /// centroid, continuity, sweep, max-extension.
    Verify {
        suite: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run an experiment: concentration, expected-polytope, nonmonotone,
    /// minkowski-conjecture, fingerprint.
    Experiment {
        name: String,
        /// Shape JSON replacing the default unit square (concentration, expected-polytope).
        #[arg(long)]
        shape: Option<PathBuf>,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Number of grid directions (720 for bodies; suites have their own defaults).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the main tolerance of a suite or experiment.
    #[arg(long)]
    tol: Option<f64>,
    /// Number of random cases, trials or seeds.
    #[arg(long)]
    count: Option<usize>,
    /// Largest sample size (concentration).
    #[arg(long)]
    n: Option<usize>,
    /// Relative sandwich width (concentration).
    #[arg(long)]
    eps: Option<f64>,
    /// JSON output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG figure output file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl Opts {
    fn params(&self) -> Params {
        Params {
            seed: self.seed,
            grid: self.grid,
            tol: self.tol,
            alpha: self.alpha,
            tau: self.tau,
            p: self.p,
            a: self.a,
            m: self.m,
            count: self.count,
            n: self.n,
            eps: self.eps,
            shape: None,
        }
    }

    /// Expectation described by the flags alone.
    fn spec(&self) -> Result<ExpectationSpec> {
        let base = match (self.alpha, self.tau, self.p.or(self.a.map(|_| 1.0))) {
            (Some(alpha), None, None) => ExpectationSpec::avg_quantile(alpha),
            (None, Some(tau), None) => ExpectationSpec::Expectile { tau },
            (None, None, Some(p)) => ExpectationSpec::OneSided { p, a: self.a.unwrap_or(1.0) },
            (None, None, None) if self.m.is_some() => ExpectationSpec::Mean,
            (None, None, None) => return Err(Error::Input("no expectation given: pass a spec or --alpha/--tau/--p/--a/--m".into())),
            _ => return Err(Error::Input("give only one of --alpha, --tau, --p/--a".into())),
        };
        let spec = match self.m {
            Some(m) => ExpectationSpec::max_ext(base, m),
            None => base,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Body JSON: polygon vertices, support values on the grid and the certified
/// gap, or `{"empty": true}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BodyJson {
    Body { vertices: Vec<[f64; 2]>, support: SupportJson, gap: f64 },
    Empty { empty: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportJson {
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
}

impl BodyJson {
    pub fn from_estimate(b: &BodyEstimate, grid: &DirectionGrid) -> Self {
        Self::from_polygon(&b.outer, b.gap, grid)
    }

    pub fn from_polygon(p: &Polygon2, gap: f64, grid: &DirectionGrid) -> Self {
        if p.is_empty() {
            return BodyJson::Empty { empty: true };
        }
        BodyJson::Body {
            vertices: p.vertices().iter().map(|v| v.to_array()).collect(),
            support: SupportJson {
                angles: grid.angles().to_vec(),
                values: grid.directions().iter().map(|u| p.support(*u)).collect(),
            },
            gap,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("body serialises")
    }
}

/// Read a shape (`{"type": ...}`) or a weighted sample (`{"points": ...}`).
pub fn load_source(text: &str) -> Result<Source> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))?;
    if v.get("type").is_some() {
        Ok(Source::Shape(ConvexShape::from_json(text)?))
    } else if v.get("points").is_some() {
        Ok(Source::Sample(WeightedSample::from_json(text)?))
    } else {
        Err(Error::Input("source JSON needs a \"type\" (shape) or \"points\" (sample) field".into()))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn source_figure(src: &Source, fig: &mut Figure) {
    match src {
        Source::Shape(s) => fig.source_outline(&s.outline(256), "source"),
        Source::Sample(s) => fig.source_points(&s.points2().unwrap_or_default(), "sample"),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unbounded | Error::UnboundedObjective => EXIT_UNBOUNDED,
        Error::Numerical(_) | Error::Infeasible => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn cmd_body(source: &Path, spec: &Option<String>, opts: &Opts) -> Result<i32> {
    let src = load_source(&read(source)?)?;
    let spec = match spec {
        Some(s) if s.trim_start().starts_with('{') => ExpectationSpec::from_json(s)?,
        Some(s) => ExpectationSpec::from_json(&read(Path::new(s))?)?,
        None => opts.spec()?,
    };
    let grid = DirectionGrid::uniform(opts.grid.unwrap_or(720))?;
    let body = floating_like_body(&src, &spec, &grid)?;
    emit(&opts.out, &BodyJson::from_estimate(&body, &grid).to_json())?;
    if let Some(path) = &opts.svg {
        let mut fig = Figure::new();
        source_figure(&src, &mut fig);
        fig.body(body.outer.vertices(), &spec.label());
        write(path, &fig.render())?;
    }
    Ok(EXIT_OK)
}

fn cmd_depth(source: &Path, opts: &Opts) -> Result<i32> {
    let src = load_source(&read(source)?)?;
    let delta = opts.alpha.ok_or_else(|| Error::Input("depth needs --alpha".into()))?;
    let grid = DirectionGrid::uniform(opts.grid.unwrap_or(720))?;
    let d = depth_region(&src, delta, &grid)?;
    if d.atomic {
        eprintln!("warning: atomic source; regions use the lower quantile q_(1-delta)");
    }
    let gap = if d.is_empty() { 0.0 } else { body_from_support(&SupportField::new(grid.clone(), d.offsets.clone(), None)?)?.gap };
    emit(&opts.out, &BodyJson::from_polygon(&d.region, gap, &grid).to_json())?;
    if let Some(path) = &opts.svg {
        let mut fig = Figure::new();
        source_figure(&src, &mut fig);
        if !d.is_empty() {
            fig.body(d.region.vertices(), &format!("D_{delta}"));
        }
        write(path, &fig.render())?;
    }
    Ok(EXIT_OK)
}

fn finish(report: &Report, fig: Option<Figure>, opts: &Opts) -> Result<i32> {
    emit(&opts.out, &report.to_json())?;
    if let (Some(path), Some(fig)) = (&opts.svg, fig) {
        write(path, &fig.render())?;
    }
    for c in report.failures() {
        eprintln!("FAIL {}: {} > {}", c.name, c.value, c.tolerance);
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.cmd {
        Cmd::Body { source, spec, opts } => cmd_body(source, spec, opts),
        Cmd::Depth { source, opts } => cmd_depth(source, opts),
        Cmd::Verify { suite, opts } => run_suite(suite, &opts.params()).and_then(|r| finish(&r, None, opts)),
        Cmd::Experiment { name, shape, opts } => (|| {
            let mut params = opts.params();
            if let Some(path) = shape {
                params.shape = Some(ConvexShape::from_json(&read(path)?)?);
            }
            let (report, fig) = run_experiment(name, &params)?;
            finish(&report, fig, opts)
        })(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
