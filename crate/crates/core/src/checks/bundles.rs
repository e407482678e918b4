//! Differential bundles, the dual fibration, the involution and `c*`.

use std::sync::Arc;

use crate::bundle::cocycle::inverse_transpose;
use crate::bundle::{
    factor_through_pullback, CanonicalFlipStar, CocycleBundle, CoordBundle, DifferentialBundle, DualFibrationMap, LinearBundleMorphism,
    SystemOfBundles,
};
use crate::manifold::atlas::sample_region;
use crate::manifold::library::{circle, double_cover, mobius, sphere};
use crate::sample::{Agreement, Sampler};
use crate::smooth::SmoothMap;
use crate::tangent::tangent_map;
use crate::RMatrix;

use super::generators::{composable_pairs, smooth_maps};
use super::{sampled, CheckConfig, CheckEntry, Recorder};

const AXIOMS: &str = "differential bundle";
const DUAL: &str = "dual fibration";
const INVOLUTION: &str = "linear involution";

fn record_all(r: &mut Recorder, case: &str, anchor: &str, laws: Vec<(String, Agreement)>) {
    for (law, a) in laws {
        r.record(&law, case, anchor, a);
    }
}

fn flat(m: &RMatrix) -> Vec<f64> {
    (0..m.rows()).flat_map(|i| m.row(i).to_vec()).collect()
}

fn eval_expr_matrix(m: &[Vec<crate::expr::Expr>], x: &[f64]) -> Vec<f64> {
    m.iter().flat_map(|row| row.iter().map(|e| e.eval(x).unwrap_or(f64::NAN))).collect()
}

/// `E*` transitions against a numeric inverse transpose, and the symbolic
/// double inverse transpose against the original.
fn cocycle_dual_checks(r: &mut Recorder, case: &str, e: &CocycleBundle, cfg: &CheckConfig) {
    let star = e.star();
    let mut sampler = Sampler::new(cfg.seed);
    let mut rows = Vec::new();
    let mut double = Vec::new();
    for entry in &e.entries {
        let back = inverse_transpose(&entry.matrix).and_then(|m| inverse_transpose(&m));
        let quota = cfg.points.div_ceil(e.entries.len());
        let mut taken = 0;
        for _ in 0..20 * quota {
            if taken == quota {
                break;
            }
            let x = sample_region(&mut sampler, &entry.region);
            let (Some(g), Some(gs)) = (e.transition_at(entry.from, entry.to, &x), star.transition_at(entry.from, entry.to, &x)) else {
                continue;
            };
            let expected = g.transpose().inverse().map(|m| flat(&m)).unwrap_or_default();
            taken += 1;
            rows.push((x.clone(), flat(&gs), expected));
            if let Some(b) = &back {
                double.push((x.clone(), eval_expr_matrix(b, &x), eval_expr_matrix(&entry.matrix, &x)));
            }
        }
    }
    r.record("star_inverse_transpose", case, INVOLUTION, sampled(cfg.tol, rows));
    r.record("star_star", case, INVOLUTION, sampled(cfg.tol, double));
}

pub(super) fn suite(cfg: &CheckConfig) -> Vec<CheckEntry> {
    let mut r = Recorder::new("bundles", cfg.seed);
    let cmp = cfg.compare();
    let maps = smooth_maps();

    record_all(&mut r, "trivial(2,3)", AXIOMS, CoordBundle::trivial(2, 3).verify_axioms(&cmp));
    for n in 1..=3 {
        record_all(&mut r, &format!("T(R^{n})"), AXIOMS, CoordBundle::tangent_bundle(n).verify_axioms(&cmp));
        r.exact("trivial_self_dual", &format!("T(R^{n})"), INVOLUTION, {
            let t = CoordBundle::tangent_bundle(n);
            t.star() == t && t.star().star() == t
        });
    }
    let e = CoordBundle::trivial(1, 2);
    record_all(&mut r, "T(trivial(1,2))", "tangent bundle of a bundle", e.tangent().verify_axioms(&cmp));
    record_all(&mut r, "T(T(R^1))", "tangent bundle of a bundle", CoordBundle::tangent_bundle(1).tangent().verify_axioms(&cmp));

    for (name, f) in &maps {
        let (n, m) = (f.dom(), f.cod());
        let target = CoordBundle::tangent_bundle(m);
        let (pb, cart) = target.pullback(f).expect("f lands in the base");
        record_all(&mut r, &format!("pullback[{name}]"), AXIOMS, pb.verify_axioms(&cmp));
        record_all(&mut r, &format!("cartesian[{name}]"), "pullback bundle", cart.verify(&cmp));

        // T(F) factors through the pullback along F, and the factor recovers it
        let tf = LinearBundleMorphism::new(CoordBundle::tangent_bundle(n), target.clone(), f.clone(), tangent_map(f)).unwrap();
        record_all(&mut r, &format!("tangent_morphism[{name}]"), "linear bundle morphism", tf.verify(&cmp));
        record_all(&mut r, &format!("tangent_of_morphism[{name}]"), "linear bundle morphism", tf.tangent().verify(&cmp));
        match factor_through_pullback(&tf, &SmoothMap::identity(n), &pb) {
            Ok(k) => {
                let back = k.then(&cart).map(|kc| cmp.maps(kc.total(), tf.total()));
                r.record("pullback_factorization", name, "pullback bundle", back.unwrap_or_else(|e| Agreement::failed(e.to_string())));
            }
            Err(e) => r.error("pullback_factorization", name, "pullback bundle", &e),
        }

        // the dual of a pullback square is Cartesian, with an explicit inverse
        let d = cart.star();
        match d.cartesian_inverse() {
            Ok((g_inv, forward)) => {
                let pb_total = d.fibre().dom();
                let left = g_inv.then(d.fibre()).map(|h| cmp.maps(&h, &SmoothMap::identity(d.source().total_dim())));
                let right = d.fibre().then(&g_inv).map(|h| cmp.maps(&h, &SmoothMap::identity(pb_total)));
                let ok = |x: crate::error::Result<Agreement>| x.unwrap_or_else(|e| Agreement::failed(e.to_string()));
                r.record("cartesian_inverse_left", name, "Cartesian maps in the dual fibration", ok(left));
                r.record("cartesian_inverse_right", name, "Cartesian maps in the dual fibration", ok(right));
                record_all(&mut r, &format!("cartesian_forward[{name}]"), "Cartesian maps in the dual fibration", forward.verify(&cmp));
            }
            Err(e) => r.error("cartesian_inverse", name, "Cartesian maps in the dual fibration", &e),
        }

        let rd = DualFibrationMap::reverse_derivative(f);
        record_all(&mut r, &format!("dual_map[{name}]"), DUAL, rd.verify(&cmp));
        let left = DualFibrationMap::identity(rd.source()).then(&rd).map(|x| x.compare(&rd, &cmp));
        let right = rd.then(&DualFibrationMap::identity(rd.target())).map(|x| x.compare(&rd, &cmp));
        r.record("dual_left_unit", name, DUAL, left.unwrap_or_else(|e| Agreement::failed(e.to_string())));
        r.record("dual_right_unit", name, DUAL, right.unwrap_or_else(|e| Agreement::failed(e.to_string())));
        r.record("star_star_morphism", name, INVOLUTION, rd.star().star().compare(&rd, &cmp));

        let flip = CanonicalFlipStar::new(n);
        r.record("flip_star_natural", name, "c* isomorphism", flip.naturality(f, &cmp));
    }

    for ((fname, f), (gname, g)) in composable_pairs(&maps) {
        let (rf, rg) = (DualFibrationMap::reverse_derivative(f), DualFibrationMap::reverse_derivative(g));
        for (hname, h) in maps.iter().filter(|(_, h)| h.dom() == g.cod()) {
            let rh = DualFibrationMap::reverse_derivative(h);
            let left = rf.then(&rg).and_then(|x| x.then(&rh));
            let right = rg.then(&rh).and_then(|x| rf.then(&x));
            let case = format!("{fname};{gname};{hname}");
            match (left, right) {
                (Ok(a), Ok(b)) => r.record("dual_associative", &case, DUAL, a.compare(&b, &cmp)),
                (Err(e), _) | (_, Err(e)) => r.error("dual_associative", &case, DUAL, &e),
            }
        }
    }

    // over a fixed base the dual fibre category reverses composition
    for n in 1..=2 {
        let e = CoordBundle::tangent_bundle(n);
        let scale = SmoothMap::parse(&linear_source(n, "x0")).unwrap();
        let shear = SmoothMap::parse(&linear_source(n, "1")).unwrap();
        let g = LinearBundleMorphism::new(e.clone(), e.clone(), SmoothMap::identity(n), scale).unwrap();
        let h = LinearBundleMorphism::new(e.clone(), e.clone(), SmoothMap::identity(n), shear).unwrap();
        let gh = g.then(&h).unwrap().star();
        let composed = g.star().then(&h.star()).map(|x| x.compare(&gh, &cmp));
        r.record("dual_fibre_contravariant", &format!("R^{n}"), DUAL, composed.unwrap_or_else(|e| Agreement::failed(e.to_string())));
    }

    for n in 1..=3 {
        let flip = CanonicalFlipStar::new(n);
        r.record("flip_star_triangle", &format!("R^{n}"), "c* isomorphism", flip.triangle(&cmp));
        r.record("flip_star_inverse", &format!("R^{n}"), "c* isomorphism", flip.inverse_law(&cmp));
    }

    let c = Arc::new(circle());
    let s = Arc::new(sphere());
    let mob = mobius(c.clone(), -1);
    let tm = CocycleBundle::tangent_bundle(s.clone());
    let samples = cfg.points;
    for (case, b) in [
        ("mobius", mob.clone()),
        ("T(S2)", tm.clone()),
        ("T*(S2)", tm.star()),
        ("T(T(S2))", tm.tangent()),
        ("T(S1)", CocycleBundle::tangent_bundle(c.clone())),
    ] {
        record_all(&mut r, case, AXIOMS, b.verify_axioms(cfg.seed, samples, cfg.tol));
    }
    match mob.pullback(&double_cover(c.clone())) {
        Ok(pb) => record_all(&mut r, "mobius_along_double_cover", "pullback bundle", pb.verify_axioms(cfg.seed, samples, cfg.tol)),
        Err(e) => r.error("cocycle_pullback", "mobius_along_double_cover", "pullback bundle", &e),
    }
    // negative control: a corrupted transition must be caught, with a witness
    let corrupted = mobius(c.clone(), 2).verify_axioms(cfg.seed, samples, cfg.tol);
    let caught = corrupted.iter().any(|(law, a)| law == "cocycle_condition" && !a.holds && a.witness.is_some());
    r.exact("corrupted_cocycle_detected", "mobius", AXIOMS, caught);
    cocycle_dual_checks(&mut r, "T(S2)", &tm, cfg);
    cocycle_dual_checks(&mut r, "mobius", &mob, cfg);

    let system = SystemOfBundles::new();
    let t2 = DifferentialBundle::Coordinate(system.tangent_bundle(2));
    let closed = system
        .tangent_of(&t2)
        .and_then(|tt| system.star(&tt))
        .and_then(|_| system.pullback(&CoordBundle::tangent_bundle(2), &maps[3].1))
        .map(|(pb, _)| system.contains(&DifferentialBundle::Coordinate(pb)))
        .unwrap_or(false);
    let tms = DifferentialBundle::Cocycle(system.manifold_tangent_bundle(s));
    r.exact("system_closure", "", "system of differential bundles", closed && system.star(&tms).is_ok());
    let outsider = DifferentialBundle::Coordinate(CoordBundle::trivial(3, 1));
    r.exact("system_rejects_unregistered", "", "system of differential bundles", system.star(&outsider).is_err());
    r.entries
}

/// `(map 2n 2n x v')` with fibre `v'ᵢ = coef · vᵢ + v_{i+1}` (cyclic).
fn linear_source(n: usize, coef: &str) -> String {
    let mut out = format!("(map {} {}", 2 * n, 2 * n);
    for i in 0..n {
        out.push_str(&format!(" x{i}"));
    }
    for i in 0..n {
        let next = n + (i + 1) % n;
        out.push_str(&format!(" (+ (* {coef} x{}) x{next})", n + i));
    }
    out.push(')');
    out
}
