//! `revtan`: derivative queries, law checks and the manifold optimizer.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage/parse/invariant error,
//! 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use revtan::checks::{self, CheckConfig};
use revtan::manifold::load::{load_field, load_map, load_metric, resolve_atlas};
use revtan::manifold::map::DET_FLOOR;
use revtan::manifold::optimize::optimize;
use revtan::manifold::point::ManifoldPoint;
use revtan::manifold::{library, ManifoldMap};
use revtan::reverse::r_combinator;
use revtan::scalar::rational_to_f64;
use revtan::tangent::d_combinator;
use revtan::{Error, Rational, SmoothMap};

#[derive(Parser)]
#[command(name = "revtan", version, about = "Forward and reverse tangent structure, checked")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a map at a point.
    Eval { map: String, point: String },
    /// Forward derivative `D[F](x, v)`.
    Jvp { map: String, point: String, vector: String },
    /// Reverse derivative `R[F](x, w)`.
    Vjp { map: String, point: String, covector: String },
    /// Run a law-check suite: smooth, forward, reverse, bundles, manifold, algebra or all.
    Check {
        suite: String,
        #[arg(long, default_value_t = CheckConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = CheckConfig::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = CheckConfig::default().tight_tol)]
        tight_tol: f64,
        #[arg(long, default_value_t = CheckConfig::default().chart_tol)]
        chart_tol: f64,
        #[arg(long, default_value_t = CheckConfig::default().points)]
        points: usize,
        /// Also write the full report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Pull a covector field back along a manifold map.
    PullbackForm { map: PathBuf, field: PathBuf },
    /// Test whether a manifold map is a local diffeomorphism.
    Etale {
        map: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = DET_FLOOR)]
        floor: f64,
    },
    /// Riemannian gradient descent on a real-valued manifold map.
    Optimize {
        objective: PathBuf,
        atlas: String,
        metric: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 1e-9)]
        gtol: f64,
        /// `chart:c0,c1,...`; defaults to 0.1 rad off the north pole on the
        /// builtin sphere and the centre of the first chart otherwise.
        #[arg(long)]
        start: Option<String>,
    },
    /// Summarize a saved check report.
    Report {
        #[arg(long)]
        json: PathBuf,
    },
}

enum Failure {
    Checks,
    Input(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn require_file(path: &Path) -> Result<(), Failure> {
    std::fs::metadata(path).map(|_| ()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// A map is inline DSL when it starts with `(`, otherwise a file.
fn smooth_map(arg: &str) -> Result<SmoothMap, Failure> {
    let text = if arg.trim_start().starts_with('(') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Io(format!("{arg}: {e}")))?
    };
    SmoothMap::parse(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

enum Vector {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl Vector {
    fn floats(&self) -> Vec<f64> {
        match self {
            Vector::Exact(v) => v.iter().map(rational_to_f64).collect(),
            Vector::Float(v) => v.clone(),
        }
    }
}

/// `a,b,c` with optional parentheses; entries are integers, fractions or decimals.
fn vector(arg: &str) -> Result<Vector, Failure> {
    let inner = arg.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if let Ok(exact) = parts.iter().map(|s| s.parse::<Rational>()).collect::<Result<Vec<_>, _>>() {
        return Ok(Vector::Exact(exact));
    }
    parts
        .iter()
        .map(|s| s.parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map(Vector::Float)
        .map_err(|_| Failure::Input(format!("cannot read {arg:?} as a vector of numbers")))
}

fn check_len(what: &str, v: &Vector, n: usize) -> Result<(), Failure> {
    let len = match v {
        Vector::Exact(x) => x.len(),
        Vector::Float(x) => x.len(),
    };
    if len != n {
        return Err(Error::Dimension { context: what.into(), expected: n, found: len }.into());
    }
    Ok(())
}

fn tuple<T: std::fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Exact output when the inputs are rational and the map stays rational there.
fn evaluate(f: &SmoothMap, x: &Vector) -> Result<String, Failure> {
    if let Vector::Exact(q) = x {
        if let Ok(y) = f.eval_exact(q) {
            return Ok(tuple(&y));
        }
    }
    Ok(tuple(&f.eval(&x.floats())?))
}

fn concat(a: Vector, b: Vector) -> Vector {
    match (a, b) {
        (Vector::Exact(mut a), Vector::Exact(b)) => {
            a.extend(b);
            Vector::Exact(a)
        }
        (a, b) => Vector::Float([a.floats(), b.floats()].concat()),
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Eval { map, point } => {
            let f = smooth_map(&map)?;
            let x = vector(&point)?;
            check_len("point", &x, f.dom())?;
            println!("{}", evaluate(&f, &x)?);
        }
        Command::Jvp { map, point, vector: v } => {
            let f = smooth_map(&map)?;
            let (x, v) = (vector(&point)?, vector(&v)?);
            check_len("point", &x, f.dom())?;
            check_len("vector", &v, f.dom())?;
            println!("{}", evaluate(&d_combinator(&f), &concat(x, v))?);
        }
        Command::Vjp { map, point, covector } => {
            let f = smooth_map(&map)?;
            let (x, w) = (vector(&point)?, vector(&covector)?);
            check_len("point", &x, f.dom())?;
            check_len("covector", &w, f.cod())?;
            println!("{}", evaluate(&r_combinator(&f), &concat(x, w))?);
        }
        Command::Check { suite, seed, tol, tight_tol, chart_tol, points, json } => {
            let config = CheckConfig { seed, points, tol, tight_tol, chart_tol };
            let report = checks::run(&suite, &config)?;
            if let Some(path) = json {
                std::fs::write(&path, report.to_json() + "\n").map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            println!("suite {} seed {}: {} passed, {} failed", report.suite, report.seed, report.passed, report.failed);
            for e in report.failures() {
                let detail = e.note.clone().unwrap_or_else(|| format!("max error {:e} > {:e}", e.max_error, e.tolerance));
                println!("FAIL {} ({detail})", e.law);
            }
            if !report.all_pass() {
                return Err(Failure::Checks);
            }
        }
        Command::PullbackForm { map, field } => {
            require_file(&map)?;
            require_file(&field)?;
            let f = load_map(&map)?;
            let omega = load_field(&field)?;
            let pulled = omega.pullback(&f)?;
            for piece in &pulled.pieces {
                let chart = &pulled.atlas.charts[piece.chart];
                println!("chart {} on {:?}: {}", chart.id, piece.region, piece.components().to_source());
            }
            println!("section law: {}", pulled.section_law());
        }
        Command::Etale { map, seed, points, floor } => {
            require_file(&map)?;
            let f = load_map(&map)?;
            let report = f.is_etale(seed, points, floor);
            println!("etale: {}, min |det| = {}", report.etale, report.min_det);
            if !report.etale {
                if let Some(w) = &report.worst {
                    println!("worst point: chart {} at {:?}", f.source.charts[w.chart].id, w.coords);
                }
                return Err(Failure::Checks);
            }
        }
        Command::Optimize { objective, atlas, metric, step, iters, gtol, start } => {
            require_file(&objective)?;
            require_file(&metric)?;
            let h = load_map(&objective)?;
            let given = resolve_atlas(&atlas, Path::new("./atlas"))?;
            if given.name != h.source.name || given.dim != h.source.dim {
                return Err(Error::BaseMismatch(format!("objective is defined on {}, not {}", h.source.name, given.name)).into());
            }
            if h.target.dim != 1 {
                return Err(Error::Dimension { context: "objective codomain".into(), expected: 1, found: h.target.dim }.into());
            }
            let g = load_metric(&metric, h.source.clone())?;
            let x0 = start_point(&h, &atlas, start.as_deref())?;
            let trace = optimize(&h, &g, x0, step, iters, gtol)?;
            let last = trace.last();
            println!("steps: {}", trace.points.len() - 1);
            println!("value: {:.12}", trace.values.last().copied().unwrap_or(f64::NAN));
            println!("point: chart {} at {}", h.source.charts[last.chart].id, tuple(&last.coords));
            println!("converged: {}", trace.converged);
            println!("monotone: {}", trace.monotone());
        }
        Command::Report { json } => {
            let text = std::fs::read_to_string(&json).map_err(|e| Failure::Io(format!("{}: {e}", json.display())))?;
            summarize(&text, &json)?;
        }
    }
    Ok(())
}

fn start_point(h: &ManifoldMap, atlas: &str, start: Option<&str>) -> Result<ManifoldPoint, Failure> {
    let source: &Arc<_> = &h.source;
    let Some(spec) = start else {
        if atlas == "builtin:sphere" {
            return Ok(library::sphere_point_from_north(0.1));
        }
        let chart = &source.charts[0];
        return Ok(ManifoldPoint { chart: 0, coords: chart.region.iter().map(|(lo, hi)| (lo + hi) / 2.0).collect() });
    };
    let (id, coords) = spec.split_once(':').ok_or_else(|| Failure::Input(format!("start {spec:?} is not chart:coords")))?;
    let chart = source.chart_index(id).ok_or_else(|| Failure::Input(format!("unknown chart {id:?}")))?;
    Ok(ManifoldPoint::new(source, chart, vector(coords)?.floats())?)
}

fn summarize(text: &str, path: &Path) -> Result<(), Failure> {
    let bad = |msg: &str| Failure::Input(format!("{}: {msg}", path.display()));
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    if v["schema"].as_u64() != Some(checks::SCHEMA_VERSION as u64) {
        return Err(bad("unsupported report schema"));
    }
    let entries = v["entries"].as_array().ok_or_else(|| bad("missing entries"))?;
    let failed: Vec<&str> = entries.iter().filter(|e| e["status"] == "fail").filter_map(|e| e["law"].as_str()).collect();
    println!(
        "suite {} seed {}: {} passed, {} failed",
        v["suite"].as_str().unwrap_or("?"),
        v["seed"],
        entries.len() - failed.len(),
        failed.len()
    );
    for law in &failed {
        println!("FAIL {law}");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
