//! Standard atlases and maps.
//!
//! Circle coordinates are in turns (one full revolution is 1), which keeps
//! every transition a rational affine map.

use std::sync::Arc;

use crate::bundle::{CocycleBundle, CocycleEntry};
use crate::expr::Expr;
use crate::scalar::{int, Rational};
use crate::smooth::SmoothMap;

use super::atlas::{Atlas, Chart, Patch, Region};
use super::field::CovectorField;
use super::map::ManifoldMap;
use super::point::ManifoldPoint;

/// Half-width of the single chart of `ℝⁿ`.
pub const EUCLIDEAN_BOUND: f64 = 1e6;

fn affine(shift: Rational) -> SmoothMap {
    SmoothMap::new(1, vec![Expr::var(0).add(&Expr::constant(shift))]).unwrap()
}

fn scaled(k: i64, shift: i64) -> SmoothMap {
    SmoothMap::new(1, vec![Expr::integer(k).mul(&Expr::var(0)).add(&Expr::integer(shift))]).unwrap()
}

/// Chart `0` on `(0, 1)` and chart `1` on `(-1/2, 1/2)`.
pub fn circle() -> Atlas {
    let charts = vec![Chart::new("0", vec![(0.0, 1.0)]), Chart::new("1", vec![(-0.5, 0.5)])];
    let t = |from, to, lo: f64, hi: f64, shift: i64| Patch::new(from, to, vec![(lo, hi)], Vec::new(), affine(int(shift)));
    let transitions = vec![t(0, 1, 0.0, 0.5, 0), t(0, 1, 0.5, 1.0, -1), t(1, 0, 0.0, 0.5, 0), t(1, 0, -0.5, 0.0, 1)];
    Atlas::new("circle", 1, charts, transitions).unwrap()
}

fn squared_norm() -> Expr {
    Expr::sum([Expr::var(0).powi(2), Expr::var(1).powi(2)])
}

/// Stereographic charts on `(-2, 2)²`: `N` projects from the north pole (its
/// origin is the south pole), `S` from the south pole.
pub fn sphere() -> Atlas {
    let region: Region = vec![(-2.0, 2.0); 2];
    let charts = vec![Chart::new("N", region.clone()), Chart::new("S", region.clone())];
    let inv = squared_norm().inv();
    let invert = SmoothMap::new(2, vec![Expr::var(0).mul(&inv), Expr::var(1).mul(&inv)]).unwrap();
    let transitions = vec![Patch::new(0, 1, region.clone(), Vec::new(), invert.clone()), Patch::new(1, 0, region, Vec::new(), invert)];
    Atlas::new("sphere", 2, charts, transitions).unwrap()
}

/// Charts are products of charts, transitions products of transition pieces.
pub fn product(a: &Atlas, b: &Atlas) -> Atlas {
    let mut charts = Vec::new();
    for ca in &a.charts {
        for cb in &b.charts {
            charts.push(Chart::new(format!("{}{}", ca.id, cb.id), [ca.region.clone(), cb.region.clone()].concat()));
        }
    }
    let idx = |i: usize, j: usize| i * b.charts.len() + j;
    let pieces = |atlas: &Atlas, from: usize, to: usize| -> Vec<(Region, SmoothMap)> {
        if from == to {
            vec![(atlas.charts[from].region.clone(), SmoothMap::identity(atlas.dim))]
        } else {
            atlas.transitions.iter().filter(|t| t.from == from && t.to == to).map(|t| (t.region.clone(), t.map.clone())).collect()
        }
    };
    let mut transitions = Vec::new();
    for i in 0..a.charts.len() {
        for j in 0..b.charts.len() {
            for k in 0..a.charts.len() {
                for l in 0..b.charts.len() {
                    if (i, j) == (k, l) {
                        continue;
                    }
                    for (ra, ma) in pieces(a, i, k) {
                        for (rb, mb) in pieces(b, j, l) {
                            let map = SmoothMap::product(&[&ma, &mb]);
                            transitions.push(Patch::new(idx(i, j), idx(k, l), [ra.clone(), rb].concat(), Vec::new(), map));
                        }
                    }
                }
            }
        }
    }
    Atlas::new(format!("{}×{}", a.name, b.name), a.dim + b.dim, charts, transitions).unwrap()
}

pub fn torus() -> Atlas {
    let mut t = product(&circle(), &circle());
    t.name = "torus".into();
    t
}

/// One chart `(-10⁶, 10⁶)ⁿ`.
pub fn euclidean(n: usize) -> Atlas {
    Atlas::new(format!("R^{n}"), n, vec![Chart::new("R", vec![(-EUCLIDEAN_BOUND, EUCLIDEAN_BOUND); n])], Vec::new()).unwrap()
}

/// The open box `(lo, hi)ⁿ` as a one-chart manifold.
pub fn open_box(n: usize, lo: f64, hi: f64) -> Atlas {
    Atlas::new(format!("box^{n}"), n, vec![Chart::new("box", vec![(lo, hi); n])], Vec::new()).unwrap()
}

/// `(lo, hi)ⁿ ↪ ℝⁿ`.
pub fn inclusion(n: usize, lo: f64, hi: f64) -> ManifoldMap {
    let src = Arc::new(open_box(n, lo, hi));
    let rep = Patch::new(0, 0, vec![(lo, hi); n], Vec::new(), SmoothMap::identity(n));
    ManifoldMap::new("inclusion", src, Arc::new(euclidean(n)), vec![rep]).unwrap()
}

/// `θ ↦ 2θ` on the circle.
pub fn double_cover(circle: Arc<Atlas>) -> ManifoldMap {
    let p = |from, to, lo: f64, hi: f64, shift: i64| Patch::new(from, to, vec![(lo, hi)], Vec::new(), scaled(2, shift));
    let reps = vec![
        p(0, 0, 0.0, 0.5, 0),
        p(0, 0, 0.5, 1.0, -1),
        p(0, 1, 0.25, 0.75, -1),
        p(1, 1, -0.25, 0.25, 0),
        p(1, 0, -0.5, 0.0, 1),
        p(1, 0, 0.0, 0.5, 0),
    ];
    ManifoldMap::new("double_cover", circle.clone(), circle, reps).unwrap()
}

/// `θ ↦ θ + r` for `0 < r < 1/2` turns.
pub fn rotation(circle: Arc<Atlas>, r: Rational) -> ManifoldMap {
    let rf = crate::scalar::rational_to_f64(&r);
    assert!(0.0 < rf && rf < 0.5, "rotation amount must lie in (0, 1/2)");
    let p = |from, to, lo: f64, hi: f64, shift: Rational| Patch::new(from, to, vec![(lo, hi)], Vec::new(), affine(shift));
    let reps = vec![
        p(0, 0, 0.0, 1.0 - rf, r.clone()),
        p(0, 0, 1.0 - rf, 1.0, r.clone() - int(1)),
        p(1, 1, -0.5, 0.5 - rf, r.clone()),
        p(1, 0, -rf, 0.5, r.clone()),
    ];
    ManifoldMap::new(format!("rotation({r})"), circle.clone(), circle, reps).unwrap()
}

/// The constant map at `c` turns, `0 < c < 1`.
pub fn constant_circle_map(circle: Arc<Atlas>, c: Rational) -> ManifoldMap {
    let k = SmoothMap::constant(1, &[c]);
    let reps = vec![Patch::new(0, 0, vec![(0.0, 1.0)], Vec::new(), k.clone()), Patch::new(1, 0, vec![(-0.5, 0.5)], Vec::new(), k)];
    ManifoldMap::new("constant", circle.clone(), circle, reps).unwrap()
}

/// The height `z` of the unit sphere, into `ℝ`.
pub fn height(sphere: Arc<Atlas>) -> ManifoldMap {
    let d = squared_norm().add(&Expr::one()).inv();
    // N: z = 1 - 2/(r² + 1); S: z = 2/(r² + 1) - 1
    let north = SmoothMap::new(2, vec![Expr::one().sub(&Expr::integer(2).mul(&d))]).unwrap();
    let south = SmoothMap::new(2, vec![Expr::integer(2).mul(&d).sub(&Expr::one())]).unwrap();
    let region: Region = vec![(-2.0, 2.0); 2];
    let reps = vec![Patch::new(0, 0, region.clone(), Vec::new(), north), Patch::new(1, 0, region, Vec::new(), south)];
    ManifoldMap::new("height", sphere, Arc::new(euclidean(1)), reps).unwrap()
}

/// The embedding of a sphere point in `ℝ³`.
pub fn sphere_embedding(p: &ManifoldPoint) -> [f64; 3] {
    let (u, v) = (p.coords[0], p.coords[1]);
    let r2 = u * u + v * v;
    let z = (r2 - 1.0) / (r2 + 1.0);
    let s = 2.0 / (r2 + 1.0);
    if p.chart == 0 {
        [s * u, s * v, z]
    } else {
        [s * u, s * v, -z]
    }
}

/// Sphere point at polar angle `theta` from the north pole, longitude 0.
pub fn sphere_point_from_north(theta: f64) -> ManifoldPoint {
    let u = theta.sin() / (1.0 + theta.cos());
    ManifoldPoint { chart: 1, coords: vec![u, 0.0] }
}

/// The antipodal map `p ↦ -p`; in stereographic charts `u ↦ -u` across charts.
pub fn antipodal(sphere: Arc<Atlas>) -> ManifoldMap {
    let neg = SmoothMap::new(2, vec![Expr::var(0).neg(), Expr::var(1).neg()]).unwrap();
    let region: Region = vec![(-2.0, 2.0); 2];
    let reps = vec![Patch::new(0, 1, region.clone(), Vec::new(), neg.clone()), Patch::new(1, 0, region, Vec::new(), neg)];
    ManifoldMap::new("antipodal", sphere.clone(), sphere, reps).unwrap()
}

/// The Möbius line bundle on the circle: the fibre flips sign on the
/// overlap piece `(1/2, 1)` of chart `0`. `twist` replaces that `-1`, so
/// any other value breaks the cocycle condition.
pub fn mobius(circle: Arc<Atlas>, twist: i64) -> CocycleBundle {
    let k = |v: i64| vec![vec![Expr::integer(v)]];
    let e = |from, to, lo, hi, m| CocycleEntry { from, to, region: vec![(lo, hi)], guards: Vec::new(), matrix: m };
    let entries = vec![e(0, 1, 0.0, 0.5, k(1)), e(0, 1, 0.5, 1.0, k(twist)), e(1, 0, 0.0, 0.5, k(1)), e(1, 0, -0.5, 0.0, k(-1))];
    CocycleBundle::new("mobius", circle, 1, entries).expect("entries match the circle atlas")
}

/// `dθ` on the circle in turn coordinates: component `1` in both charts.
pub fn angle_form(circle: Arc<Atlas>) -> CovectorField {
    let one = SmoothMap::constant(1, &[int(1)]);
    CovectorField::from_charts(circle, vec![one.clone(), one]).expect("one component per chart")
}

/// `dz` for the height function on the sphere.
pub fn height_form(sphere: Arc<Atlas>) -> CovectorField {
    let h = height(sphere.clone());
    let comps = h.reps.iter().map(|r| SmoothMap::new(2, r.map.jacobian().remove(0)).unwrap()).collect();
    CovectorField::from_charts(sphere, comps).expect("one component per chart")
}
