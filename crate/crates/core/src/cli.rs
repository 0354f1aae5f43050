//! Command-line front end: argument parsing, dispatch and JSON reports.
//!
//! Every invocation writes one JSON document with the tool version, an echo
//! of the configuration and a `certificates` array. Operational errors still
//! produce a document (with an `error` object and no certificates) and a
//! nonzero exit status.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bloch::{band_samples, classify_spectrum, fiber_matrix, DEFAULT_GRID, DEFAULT_SCREEN_TOL};
use crate::certify::{check_adapted, check_admissible, check_semi_adapted};
use crate::error::{Error, Result};
use crate::graph::{load_graph, load_oriented_graph, load_vertex_function, Orientation, PeriodicGraph, VertexFunction};
use crate::group::{
    babel_report, centreaza_check, check_hom1, check_hom2, conv_fiber, corollary_precis_check, is_selfadjoint,
    k_subspace_report, load_character, load_measure, Character, DiscreteGroup, Measure,
};
use crate::operators::{verify_b_equals_k2, verify_hk_commute, virial_check};

pub const DEFAULT_NUMERIC_TOL: f64 = 1e-9;
pub const DEFAULT_RADIUS: usize = 4;
pub const THREADS_ENV: &str = "WEAKCONJ_THREADS";

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "weakconj", version, about = "Weakly conjugate operators on periodic graphs and groups")]
pub struct RunConfig {
    /// JSON output (the only mode; accepted for compatibility).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Admissibility, or (semi-)adaptedness when --phi is given.
    Certify(CertifyArgs),
    /// Exact commutator identities.
    #[command(subcommand)]
    Commutator(CommutatorCommand),
    /// Eigenvectors of H lie in ker(K) (finite graphs).
    Virial(VirialArgs),
    /// Bloch fiber analysis.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
    /// Convolution operators on F × Z^d.
    #[command(subcommand)]
    Conv(ConvCommand),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub phi: Option<PathBuf>,
    /// Check the full adapted condition, not only the semi-adapted one.
    #[arg(long)]
    pub full: bool,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutatorCommand {
    Verify(CommutatorArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CommutatorArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub phi: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct VirialArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub phi: PathBuf,
    #[arg(long, default_value_t = DEFAULT_NUMERIC_TOL)]
    pub tol: f64,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumCommand {
    /// Sampled band functions.
    Bands(BandsArgs),
    /// Flat bands, band ranges and theorem cross-checks.
    Classify(ClassifyArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BandsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Use the orientation tags of the graph file.
    #[arg(long)]
    pub orient: bool,
    #[arg(long)]
    pub phi: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_SCREEN_TOL)]
    pub tol: f64,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvCommand {
    Analyze(ConvArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ConvArgs {
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Real character {"slope": [...]}.
    #[arg(long = "char")]
    pub character: Option<PathBuf>,
    /// Corollary check (needs --char).
    #[arg(long)]
    pub precis: bool,
    /// Central-measure check on μ₀ + μ₁.
    #[arg(long, num_args = 2, value_names = ["MU0", "MU1"])]
    pub centreaza: Option<Vec<PathBuf>>,
    /// Multiplication-operator report on Z^d, with --measure as m₀.
    #[arg(long)]
    pub babel: bool,
    /// Compactly supported m₁ for --babel.
    #[arg(long, requires = "babel")]
    pub babel_shift: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_SCREEN_TOL)]
    pub tol: f64,
}

impl RunConfig {
    /// Checks the numeric invariants: grid ≥ 3, tolerances > 0, radius ≥ 3.
    pub fn validate(&self) -> Result<()> {
        let grid = |g: usize| {
            if g < 3 {
                Err(Error::Config(format!("grid must be at least 3, got {g}")))
            } else {
                Ok(())
            }
        };
        let tol = |t: f64| {
            if t > 0.0 && t.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("tolerance must be positive, got {t}")))
            }
        };
        match &self.command {
            Command::Certify(_) => Ok(()),
            Command::Commutator(CommutatorCommand::Verify(a)) if a.radius < 3 => {
                Err(Error::Config(format!("radius must be at least 3, got {}", a.radius)))
            }
            Command::Commutator(_) => Ok(()),
            Command::Virial(a) => tol(a.tol),
            Command::Spectrum(SpectrumCommand::Bands(a)) => grid(a.grid),
            Command::Spectrum(SpectrumCommand::Classify(a)) => grid(a.grid).and(tol(a.tol)),
            Command::Conv(ConvCommand::Analyze(a)) => grid(a.grid).and(tol(a.tol)),
        }
    }

    fn name(&self) -> &'static str {
        match &self.command {
            Command::Certify(_) => "certify",
            Command::Commutator(_) => "commutator verify",
            Command::Virial(_) => "virial",
            Command::Spectrum(SpectrumCommand::Bands(_)) => "spectrum bands",
            Command::Spectrum(SpectrumCommand::Classify(_)) => "spectrum classify",
            Command::Conv(_) => "conv analyze",
        }
    }
}

/// Outcome of one invocation: exit status and the rendered report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report: String,
}

struct Report {
    certificates: Vec<Value>,
    extra: Map<String, Value>,
}

impl Report {
    fn new() -> Self {
        Report {
            certificates: Vec::new(),
            extra: Map::new(),
        }
    }

    fn cert<T: Serialize>(&mut self, c: &T) -> Result<()> {
        self.certificates.push(to_value(c)?);
        Ok(())
    }

    fn set<T: Serialize>(&mut self, key: &str, v: &T) -> Result<()> {
        self.extra.insert(key.to_string(), to_value(v)?);
        Ok(())
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("report serialization: {e}")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn graph_file(path: &Path) -> Result<PeriodicGraph> {
    load_graph(&read(path)?)
}

fn oriented_graph_file(path: &Path) -> Result<(PeriodicGraph, Orientation)> {
    load_oriented_graph(&read(path)?)
}

fn phi_file(g: &PeriodicGraph, path: &Path) -> Result<VertexFunction> {
    load_vertex_function(g, &read(path)?)
}

fn measure_file(path: &Path) -> Result<(DiscreteGroup, Measure)> {
    load_measure(&read(path)?)
}

fn graph_header(r: &mut Report, g: &PeriodicGraph) -> Result<()> {
    r.set("cell_labels", &g.cell())?;
    r.set("rank", &g.rank())
}

fn certify(a: &CertifyArgs, r: &mut Report) -> Result<()> {
    match &a.phi {
        None => {
            let (g, o) = oriented_graph_file(&a.graph)?;
            graph_header(r, &g)?;
            r.cert(&check_admissible(&g, &o)?)
        }
        Some(p) => {
            let g = graph_file(&a.graph)?;
            graph_header(r, &g)?;
            let phi = phi_file(&g, p)?;
            r.cert(&check_semi_adapted(&g, &phi)?)?;
            if a.full {
                r.cert(&check_adapted(&g, &phi)?)?;
            }
            Ok(())
        }
    }
}

fn commutator(a: &CommutatorArgs, r: &mut Report) -> Result<()> {
    let g = graph_file(&a.graph)?;
    graph_header(r, &g)?;
    let phi = phi_file(&g, &a.phi)?;
    r.cert(&check_semi_adapted(&g, &phi)?)?;
    r.cert(&verify_hk_commute(&g, &phi, a.radius)?)?;
    r.cert(&verify_b_equals_k2(&g, &phi, a.radius)?)
}

fn virial(a: &VirialArgs, r: &mut Report) -> Result<()> {
    let g = graph_file(&a.graph)?;
    graph_header(r, &g)?;
    let phi = phi_file(&g, &a.phi)?;
    r.cert(&virial_check(&g, &phi, a.tol)?)
}

fn bands(a: &BandsArgs, r: &mut Report) -> Result<()> {
    let g = graph_file(&a.graph)?;
    graph_header(r, &g)?;
    let m = fiber_matrix(&g);
    r.set("fiber", &m.to_json())?;
    r.set("bands", &band_samples(&m, a.grid)?)
}

fn classify(a: &ClassifyArgs, r: &mut Report) -> Result<()> {
    let (g, o) = if a.orient {
        let (g, o) = oriented_graph_file(&a.graph)?;
        (g, Some(o))
    } else {
        (graph_file(&a.graph)?, None)
    };
    graph_header(r, &g)?;
    let phi = a.phi.as_deref().map(|p| phi_file(&g, p)).transpose()?;
    let report = classify_spectrum(&g, o.as_ref(), phi.as_ref(), a.grid, a.tol)?;
    for b in &report.flat_bands {
        r.cert(&b.certificate)?;
    }
    for c in &report.cross_checks {
        for cert in &c.certificates {
            r.cert(cert)?;
        }
    }
    r.set("report", &report)
}

fn same_group(a: &DiscreteGroup, b: &DiscreteGroup) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::InvalidGroup("measures live on different groups".into()))
    }
}

fn measure_summary(g: &DiscreteGroup, mu: &Measure, grid: usize, tol: f64) -> Result<Value> {
    let fiber = conv_fiber(g, mu);
    let selfadjoint = is_selfadjoint(g, mu);
    let mut out = json!({
        "selfadjoint": selfadjoint,
        "total_variation": mu.total_variation(),
        "fiber": fiber.to_json(),
    });
    if selfadjoint {
        out["report"] = to_value(&crate::bloch::analyze_fiber(&fiber, grid, tol)?)?;
    }
    Ok(out)
}

fn conv(a: &ConvArgs, r: &mut Report) -> Result<()> {
    let base = a.measure.as_deref().map(measure_file).transpose()?;
    let character = |g: &DiscreteGroup| -> Result<Option<Character>> {
        a.character
            .as_deref()
            .map(|p| read(p).and_then(|text| load_character(g, &text)))
            .transpose()
    };
    if base.is_none() && a.centreaza.is_none() {
        return Err(Error::Config("conv analyze needs --measure or --centreaza".into()));
    }
    if let Some((g, mu)) = &base {
        r.set("group_order", &g.finite().order())?;
        r.set("group_elements", &g.finite().names())?;
        r.set("rank", &g.rank())?;
        r.set("measure", &measure_summary(g, mu, a.grid, a.tol)?)?;
        if let Some(phi) = character(g)? {
            let h1 = check_hom1(g, &phi, mu)?;
            let hom1 = h1.verdict;
            r.cert(&h1)?;
            r.cert(&check_hom2(g, &phi, mu)?)?;
            if hom1 {
                r.cert(&k_subspace_report(g, mu, &phi)?)?;
            }
            if a.precis {
                let (c, report) = corollary_precis_check(g, mu, &phi, a.grid, a.tol)?;
                r.cert(&c)?;
                if let Some(report) = report {
                    r.set("precis_report", &report)?;
                }
            }
        } else if a.precis {
            return Err(Error::Config("--precis needs --char".into()));
        }
        if a.babel {
            let shift = match &a.babel_shift {
                Some(p) => {
                    let (g1, m1) = measure_file(p)?;
                    same_group(g, &g1)?;
                    m1
                }
                None => Measure::zero(),
            };
            r.cert(&babel_report(g, mu, &shift, a.grid)?)?;
        }
    } else if a.precis || a.babel || a.character.is_some() {
        return Err(Error::Config("--char, --precis and --babel need --measure".into()));
    }
    if let Some(paths) = &a.centreaza {
        let (g0, mu0) = measure_file(&paths[0])?;
        let (g1, mu1) = measure_file(&paths[1])?;
        same_group(&g0, &g1)?;
        if let Some((g, _)) = &base {
            same_group(g, &g0)?;
        }
        let (c, report) = centreaza_check(&g0, &mu0, &mu1, a.grid, a.tol)?;
        if let Some(report) = &report {
            r.set("hac_nontrivial", &report.hac_nontrivial)?;
            r.set("centreaza_report", report)?;
        }
        if let Some(data) = &c.certified {
            r.set("band_families", &data.band_families)?;
        }
        r.cert(&c)?;
    }
    Ok(())
}

fn dispatch(config: &RunConfig, r: &mut Report) -> Result<()> {
    config.validate()?;
    match &config.command {
        Command::Certify(a) => certify(a, r),
        Command::Commutator(CommutatorCommand::Verify(a)) => commutator(a, r),
        Command::Virial(a) => virial(a, r),
        Command::Spectrum(SpectrumCommand::Bands(a)) => bands(a, r),
        Command::Spectrum(SpectrumCommand::Classify(a)) => classify(a, r),
        Command::Conv(ConvCommand::Analyze(a)) => conv(a, r),
    }
}

/// Runs one configuration. Exit 0 whenever verdicts were computed, whatever
/// they are; otherwise the error's exit code and a report with no
/// certificates.
pub fn run(config: &RunConfig) -> RunOutcome {
    let mut r = Report::new();
    let result = dispatch(config, &mut r);
    let mut doc = Map::new();
    doc.insert("tool".into(), json!("weakconj"));
    doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    doc.insert("command".into(), json!(config.name()));
    doc.insert("config".into(), serde_json::to_value(config).unwrap_or(Value::Null));
    let exit_code = match result {
        Ok(()) => {
            doc.insert("certificates".into(), Value::Array(r.certificates));
            doc.extend(r.extra);
            0
        }
        Err(e) => {
            doc.insert("certificates".into(), Value::Array(vec![]));
            doc.insert("error".into(), json!({"code": e.code(), "message": e.to_string()}));
            e.exit_code()
        }
    };
    let mut report = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
    report.push('\n');
    RunOutcome { exit_code, report }
}

/// Caps the rayon pool from WEAKCONJ_THREADS (0 or unset = automatic).
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a nonnegative integer, got {raw:?}")))?;
    if n > 0 {
        // a pool built earlier in the process is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses arguments, runs and writes the report. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Error::Config(String::new()).exit_code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match configure_threads() {
        Ok(()) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match &config.output {
        Some(path) => {
            if let Err(source) = std::fs::write(path, &outcome.report) {
                let e = Error::Io {
                    path: path.display().to_string(),
                    source,
                };
                eprintln!("error: {e}");
                return e.exit_code();
            }
        }
        None => print!("{}", outcome.report),
    }
    outcome.exit_code
}
