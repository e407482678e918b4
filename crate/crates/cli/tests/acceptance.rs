//! Acceptance gate: one PASS/FAIL line per criterion, exit status nonzero if
//! any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use revtan::checks::generators::{composable_pairs, smooth_maps};
use revtan::checks::{self, CheckConfig, CheckEntry, CheckReport, Status};
use revtan::manifold::library::{height, sphere, sphere_point_from_north};
use revtan::manifold::{optimize, ManifoldPoint, Metric};
use revtan::sample::Method;

const FORWARD_TOL: f64 = 1e-9;
const ADJOINT_TOL: f64 = 1e-10;
const CHAIN_TOL: f64 = 1e-9;
const CRDC_TOL: f64 = 1e-10;
const PAIRING_TOL: f64 = 1e-10;
const CHART_TOL: f64 = 1e-12;
const MIN_POINTS: usize = 50;
const SOUTH_POLE_DIST: f64 = 1e-6;
const MAX_STEPS: usize = 500;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(problems: Vec<String>, ok: String) -> Outcome {
    if problems.is_empty() {
        Outcome { pass: true, detail: ok }
    } else {
        let shown: Vec<_> = problems.iter().take(5).cloned().collect();
        Outcome { pass: false, detail: format!("{} problem(s): {}", problems.len(), shown.join("; ")) }
    }
}

fn timed(suite: &str) -> (CheckReport, Duration) {
    let start = Instant::now();
    let report = checks::run(suite, &CheckConfig::default()).expect("suite runs");
    (report, start.elapsed())
}

fn family<'a>(report: &'a CheckReport, law: &str) -> Vec<&'a CheckEntry> {
    let prefix = format!("{}.{law}", report.suite);
    report.entries.iter().filter(|e| e.law == prefix || e.law.starts_with(&format!("{prefix}["))).collect()
}

/// Sampled entries need enough points and a tolerance no looser than `tol`;
/// everything else must be an exact comparison.
fn entry_problems(e: &CheckEntry, tol: f64) -> Option<String> {
    if e.status != Status::Pass {
        return Some(format!("{} failed", e.law));
    }
    match e.method {
        Method::Numeric if e.points < MIN_POINTS => Some(format!("{} used {} points", e.law, e.points)),
        Method::Numeric if e.tolerance > tol => Some(format!("{} tolerance {:e}", e.law, e.tolerance)),
        Method::Numeric => None,
        _ if e.tolerance != 0.0 => Some(format!("{} exact method with tolerance {:e}", e.law, e.tolerance)),
        _ => None,
    }
}

fn require(report: &CheckReport, laws: &[(&str, f64, usize)], problems: &mut Vec<String>) -> usize {
    let mut count = 0;
    for &(law, tol, min_count) in laws {
        let entries = family(report, law);
        if entries.len() < min_count {
            problems.push(format!("{law}: {} entries, expected at least {min_count}", entries.len()));
        }
        count += entries.len();
        problems.extend(entries.iter().filter_map(|e| entry_problems(e, tol)));
    }
    count
}

fn under(limit: Duration, took: Duration, problems: &mut Vec<String>) {
    if took > limit {
        problems.push(format!("runtime {took:?} exceeds {limit:?}"));
    }
}

fn forward() -> Outcome {
    let maps = smooth_maps();
    let pairs = composable_pairs(&maps).len();
    let (report, took) = timed("forward");
    let mut problems = Vec::new();
    if maps.len() < 12 {
        problems.push(format!("only {} generator maps", maps.len()));
    }
    let n = maps.len();
    let laws = [
        ("functor_composition", FORWARD_TOL, pairs),
        ("p_natural", FORWARD_TOL, n),
        ("z_natural", FORWARD_TOL, n),
        ("s_natural", FORWARD_TOL, n),
        ("l_natural", FORWARD_TOL, n),
        ("c_natural", FORWARD_TOL, n),
        ("zero_section", FORWARD_TOL, 1),
        ("sum_over_base", FORWARD_TOL, 1),
        ("sum_commutative", FORWARD_TOL, 1),
        ("sum_associative", FORWARD_TOL, 1),
        ("sum_unit", FORWARD_TOL, 1),
        ("lift_flip", FORWARD_TOL, 1),
        ("flip_involution", FORWARD_TOL, 1),
    ];
    let count = require(&report, &laws, &mut problems);
    problems.extend(report.failures().map(|e| format!("{} failed", e.law)));
    under(Duration::from_secs(60), took, &mut problems);
    outcome(problems, format!("{n} maps, {pairs} pairs, {count} law entries in {took:.2?}"))
}

fn reverse() -> Outcome {
    let maps = smooth_maps();
    let pairs = composable_pairs(&maps).len();
    let (report, took) = timed("reverse");
    let mut problems = Vec::new();
    let laws = [
        ("adjoint", ADJOINT_TOL, maps.len()),
        ("chain_rule", CHAIN_TOL, pairs),
        ("dagger_involution", 0.0, maps.len()),
        ("crdc_reconstruction", CRDC_TOL, maps.len()),
    ];
    let count = require(&report, &laws, &mut problems);
    problems.extend(report.failures().map(|e| format!("{} failed", e.law)));
    under(Duration::from_secs(60), took, &mut problems);
    outcome(problems, format!("{count} law entries in {took:.2?}"))
}

fn fibrations() -> Outcome {
    let maps = smooth_maps().len();
    let (report, _) = timed("bundles");
    let mut problems = Vec::new();
    let laws = [
        ("dual_left_unit", 0.0, maps),
        ("dual_right_unit", 0.0, maps),
        ("dual_associative", 0.0, 1),
        ("pullback_factorization", 0.0, maps),
        ("cartesian_inverse_left", 0.0, maps),
        ("cartesian_inverse_right", 0.0, maps),
        ("star_star_morphism", 0.0, maps),
        ("star_star", FORWARD_TOL, 1),
        ("flip_star_triangle", 0.0, 1),
    ];
    let count = require(&report, &laws, &mut problems);
    for e in family(&report, "flip_star_triangle") {
        if e.method != Method::Structural && e.method != Method::Exact {
            problems.push(format!("{} is not exact", e.law));
        }
    }
    problems.extend(report.failures().map(|e| format!("{} failed", e.law)));
    outcome(problems, format!("{count} law entries"))
}

fn manifold() -> Outcome {
    let (report, _) = timed("manifold");
    let mut problems = Vec::new();
    for atlas in ["circle", "sphere", "torus"] {
        for law in ["atlas_cocycle", "atlas_transition_invertible"] {
            let hit = family(&report, law).into_iter().filter(|e| e.law.ends_with(&format!("[{atlas}]"))).count();
            if hit == 0 {
                problems.push(format!("no {law} entry for {atlas}"));
            }
        }
    }
    let laws = [
        ("atlas_cocycle", FORWARD_TOL, 3),
        ("atlas_transition_invertible", 1e-8, 3),
        ("duality_pairing", PAIRING_TOL, 2),
        ("pullback_doubles_angle", CHART_TOL, 1),
        ("etale_functorial", CHART_TOL, 1),
        ("pullback_section_law", 0.0, 1),
    ];
    let count = require(&report, &laws, &mut problems);
    problems.extend(report.failures().map(|e| format!("{} failed", e.law)));
    outcome(problems, format!("{count} law entries"))
}

fn algebra() -> Outcome {
    let (report, took) = timed("algebra");
    let mut problems = Vec::new();
    for e in &report.entries {
        if e.status != Status::Pass || e.method != Method::Exact || e.tolerance != 0.0 {
            problems.push(format!("{} ({:?}, {:?}, tol {:e})", e.law, e.status, e.method, e.tolerance));
        }
    }
    for law in [
        "dualnum.functor_composition",
        "kahler.functor_composition",
        "kahler.d_leibniz",
        "module_dual.involutive",
        "derivations.matches_reverse_tangent",
    ] {
        if family(&report, law).is_empty() {
            problems.push(format!("no {law} entries"));
        }
    }
    under(Duration::from_secs(120), took, &mut problems);
    outcome(problems, format!("{} exact entries in {took:.2?}", report.entries.len()))
}

/// The embedding computed from the stereographic formulas directly.
fn south_pole_distance(p: &ManifoldPoint) -> f64 {
    let (u, v) = (p.coords[0], p.coords[1]);
    let r2 = u * u + v * v;
    let sign = if p.chart == 0 { 1.0 } else { -1.0 };
    let (x, y, z) = (2.0 * u / (1.0 + r2), 2.0 * v / (1.0 + r2), sign * (r2 - 1.0) / (r2 + 1.0));
    (x * x + y * y + (z + 1.0) * (z + 1.0)).sqrt()
}

fn optimizer() -> Outcome {
    let s = std::sync::Arc::new(sphere());
    let h = height(s.clone());
    let metric = Metric::euclidean(s);
    let start = sphere_point_from_north(0.1);
    let mut problems = Vec::new();
    let start_dist = south_pole_distance(&start);
    let off_north = 2.0 * (start_dist / 2.0).acos();
    if (off_north - 0.1).abs() > 1e-12 {
        problems.push(format!("start is {off_north} rad off the north pole"));
    }
    let trace = match optimize(&h, &metric, start, 0.1, MAX_STEPS, 0.0) {
        Ok(t) => t,
        Err(e) => return Outcome { pass: false, detail: e.to_string() },
    };
    let reached = trace.points.iter().position(|p| south_pole_distance(p) < SOUTH_POLE_DIST);
    match reached {
        Some(k) if k <= MAX_STEPS => {}
        _ => problems.push(format!("final distance {:e}", south_pole_distance(trace.last()))),
    }
    if !trace.values.windows(2).all(|w| w[1] <= w[0]) {
        problems.push("objective increased".into());
    }
    outcome(problems, format!("within {SOUTH_POLE_DIST:e} of the south pole after {} steps, monotone", reached.unwrap_or(0)))
}

fn cli_run(json: &PathBuf) -> (Option<i32>, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_revtan"))
        .args(["check", "all", "--seed", "42", "--json"])
        .arg(json)
        .output()
        .expect("revtan runs");
    let report = std::fs::read(json).unwrap_or_default();
    (out.status.code(), out.stdout, report)
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("revtan-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let (a, b) = (dir.join("first.json"), dir.join("second.json"));
    let (code_a, out_a, rep_a) = cli_run(&a);
    let (code_b, out_b, rep_b) = cli_run(&b);
    let _ = std::fs::remove_dir_all(&dir);
    let mut problems = Vec::new();
    if code_a != Some(0) || code_b != Some(0) {
        problems.push(format!("exit codes {code_a:?}, {code_b:?}"));
    }
    if rep_a.is_empty() || rep_a != rep_b {
        problems.push("reports differ".into());
    }
    if out_a != out_b {
        problems.push("stdout differs".into());
    }
    outcome(problems, format!("two runs, {} identical report bytes, exit 0", rep_a.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("forward tangent suite", forward),
        ("reverse suite", reverse),
        ("fibration suite", fibrations),
        ("manifold suite", manifold),
        ("algebra suite", algebra),
        ("optimizer on the sphere", optimizer),
        ("cli determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {}: {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
