//! Law-check suites and their JSON reports.
//!
//! Every suite is deterministic in its seed. Entries are sorted by law id,
//! so a report does not depend on the order (or thread) in which laws ran.

mod algebra;
mod bundles;
pub mod generators;
mod manifold;
mod smooth;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sample::{Agreement, Compare, Method};

pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: &[&str] = &["smooth", "forward", "reverse", "bundles", "manifold", "algebra"];

/// Tolerances and sampling for a run; defaults are the documented ones.
#[derive(Clone, Debug, Serialize)]
pub struct CheckConfig {
    pub seed: u64,
    pub points: usize,
    /// Sampled comparisons in general.
    pub tol: f64,
    /// Adjointness, the CRDC reconstruction and the dagger.
    pub tight_tol: f64,
    /// Covector pullbacks and étale functoriality on charts.
    pub chart_tol: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { seed: crate::sample::DEFAULT_SEED, points: 50, tol: 1e-9, tight_tol: 1e-10, chart_tol: 1e-12 }
    }
}

impl CheckConfig {
    pub fn compare(&self) -> Compare {
        Compare::new(self.seed, self.points, self.tol)
    }

    pub fn tight(&self) -> Compare {
        Compare::new(self.seed, self.points, self.tight_tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub law: String,
    /// The concept the law is about.
    pub anchor: String,
    pub status: Status,
    pub method: Method,
    pub points: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub generator_version: u32,
    pub config: CheckConfig,
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }
}

/// Collects entries for one suite.
pub(crate) struct Recorder {
    prefix: &'static str,
    seed: u64,
    entries: Vec<CheckEntry>,
}

impl Recorder {
    fn new(prefix: &'static str, seed: u64) -> Self {
        Recorder { prefix, seed, entries: Vec::new() }
    }

    /// `law` with an optional `[case]` suffix.
    pub(crate) fn record(&mut self, law: &str, case: &str, anchor: &str, a: Agreement) {
        let law = if case.is_empty() { format!("{}.{law}", self.prefix) } else { format!("{}.{law}[{case}]", self.prefix) };
        self.entries.push(CheckEntry {
            law,
            anchor: anchor.to_string(),
            status: if a.holds { Status::Pass } else { Status::Fail },
            method: a.method,
            points: a.points,
            max_error: a.max_error,
            tolerance: a.tolerance,
            seed: self.seed,
            witness: a.witness,
            note: a.note,
        });
    }

    pub(crate) fn exact(&mut self, law: &str, case: &str, anchor: &str, holds: bool) {
        self.record(law, case, anchor, Agreement::exact(Method::Exact, holds));
    }

    pub(crate) fn error(&mut self, law: &str, case: &str, anchor: &str, e: &Error) {
        self.record(law, case, anchor, Agreement::failed(e.to_string()));
    }
}

/// Pointwise agreement of two sampled quantities: `pairs` yields
/// `(point, lhs, rhs)`.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub(crate) fn sampled(tol: f64, pairs: impl IntoIterator<Item = (Vec<f64>, Vec<f64>, Vec<f64>)>) -> Agreement {
    let mut a = Agreement { tolerance: tol, ..Agreement::exact(Method::Numeric, true) };
    for (x, l, r) in pairs {
        a.points += 1;
        let err = if l.len() == r.len() { crate::sample::max_rel_error(&l, &r) } else { f64::INFINITY };
        if err > a.max_error {
            a.max_error = err;
        }
        // NaN errors fail too
        if !(err <= tol) && a.holds {
            a.holds = false;
            a.witness = Some(x);
        }
    }
    if a.points == 0 {
        a.holds = false;
        a.note = Some("no sample points".into());
    }
    a
}

fn run_one(suite: &str, config: &CheckConfig) -> Result<Vec<CheckEntry>> {
    let entries = match suite {
        "smooth" => smooth::smooth_suite(config),
        "forward" => smooth::forward_suite(config),
        "reverse" => smooth::reverse_suite(config),
        "bundles" => bundles::suite(config),
        "manifold" => manifold::suite(config),
        "algebra" => algebra::suite(config),
        other => return Err(Error::Unsupported(format!("unknown suite '{other}'"))),
    };
    Ok(entries)
}

/// Run one suite, or `all` of them in parallel.
pub fn run(suite: &str, config: &CheckConfig) -> Result<CheckReport> {
    let mut entries = if suite == "all" {
        let parts: Vec<Result<Vec<CheckEntry>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = SUITES.iter().map(|s| scope.spawn(move || run_one(s, config))).collect();
            handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
        });
        let mut all = Vec::new();
        for p in parts {
            all.extend(p?);
        }
        all
    } else {
        run_one(suite, config)?
    };
    entries.sort_by(|a, b| a.law.cmp(&b.law));
    let failed = entries.iter().filter(|e| e.status == Status::Fail).count();
    Ok(CheckReport {
        schema: SCHEMA_VERSION,
        suite: suite.to_string(),
        seed: config.seed,
        generator_version: generators::GENERATOR_VERSION,
        config: config.clone(),
        passed: entries.len() - failed,
        failed,
        entries,
    })
}
