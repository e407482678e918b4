use std::sync::Arc;

use proptest::prelude::*;
use revtan::manifold::library::{
    antipodal, circle, constant_circle_map, double_cover, height, inclusion, rotation, sphere, sphere_embedding, sphere_point_from_north,
    torus,
};
use revtan::manifold::{optimize, ChangeChart, Covector, CovectorField, ManifoldMap, ManifoldPoint, Metric, TangentVec};
use revtan::scalar::rat;
use revtan::SmoothMap;

fn pt(chart: usize, coords: &[f64]) -> ManifoldPoint {
    ManifoldPoint { chart, coords: coords.to_vec() }
}

fn angle_form(c: Arc<revtan::manifold::Atlas>) -> CovectorField {
    let one = SmoothMap::parse("(map 1 1 1)").unwrap();
    CovectorField::from_charts(c, vec![one.clone(), one]).unwrap()
}

#[test]
fn standard_atlases_pass_their_checks() {
    for atlas in [circle(), sphere(), torus()] {
        for (name, a) in atlas.verify(42, 50, 1e-9, 1e-8) {
            assert!(a.holds && a.points > 0, "{} {name}: {a:?}", atlas.name);
        }
    }
}

#[test]
fn circle_round_trip_through_the_overlap() {
    let c = circle();
    let p = pt(0, &[0.8]);
    let q = p.change_chart(&c, 1).unwrap();
    assert!((q.coords[0] + 0.2).abs() < 1e-15);
    let back = q.change_chart(&c, 0).unwrap();
    assert!((back.coords[0] - 0.8).abs() < 1e-12);
    assert_eq!(p.change_chart(&c, 0).unwrap(), p);
    assert!(pt(0, &[0.5]).change_chart(&c, 1).is_err());
}

#[test]
fn sphere_covector_round_trip() {
    let s = sphere();
    let phi = Covector::new(pt(0, &[0.7, -0.4]), vec![1.5, -2.0]);
    let back = phi.change_chart(&s, 1).unwrap().change_chart(&s, 0).unwrap();
    for (a, b) in back.components.iter().zip(&phi.components) {
        assert!((a - b).abs() < 1e-12);
    }
    let v = TangentVec::new(pt(0, &[0.7, -0.4]), vec![0.3, 0.1]);
    let moved_v = v.change_chart(&s, 1).unwrap();
    let moved_phi = phi.change_chart(&s, 1).unwrap();
    assert!((moved_phi.pair(&moved_v) - phi.pair(&v)).abs() < 1e-12);
}

#[test]
fn double_cover_doubles_vectors_and_covectors() {
    let c = Arc::new(circle());
    let f = double_cover(c.clone());
    assert!(f.verify(42, 50, 1e-9).holds);
    let v = f.tangent(&TangentVec::new(pt(0, &[0.3]), vec![1.25])).unwrap();
    assert_eq!(v.components, vec![2.5]);
    let x = pt(0, &[0.3]);
    let fx = f.apply(&x).unwrap();
    let phi = f.cotangent(&x, &Covector::new(fx, vec![1.0])).unwrap();
    assert_eq!(phi.components, vec![2.0]);
    let report = f.is_etale(42, 50, 1e-8);
    assert!(report.etale && report.min_det == 2.0);
    let up = f.etale_cotangent(&Covector::new(x, vec![1.0])).unwrap();
    assert_eq!(up.components, vec![0.5]);
}

#[test]
fn tangent_map_is_chart_independent() {
    let c = Arc::new(circle());
    let f = double_cover(c.clone());
    let p = pt(0, &[0.3]);
    let images: Vec<_> = f.reps_at(&p).into_iter().map(|(r, x, y)| (r.jacobian_at(&x.coords).unwrap()[(0, 0)], y)).collect();
    assert!(images.len() >= 2);
    for (j, y) in &images {
        assert_eq!(*j, 2.0);
        assert!(y.same_as(&c, &images[0].1, 1e-12));
    }
}

#[test]
fn etale_classification() {
    let c = Arc::new(circle());
    assert!(!constant_circle_map(c.clone(), rat(1, 4)).is_etale(42, 50, 1e-8).etale);
    assert!(inclusion(2, -1.0, 1.0).is_etale(42, 50, 1e-8).etale);
    let composite = double_cover(c.clone()).then(&rotation(c.clone(), rat(1, 8))).unwrap();
    assert!(composite.is_etale(42, 50, 1e-8).etale);
    let restricted = double_cover(c.clone()).restrict_to(0, vec![(0.1, 0.4)]).unwrap();
    let report = restricted.is_etale(42, 200, 1e-8);
    assert!(report.etale && report.points > 0);
    assert!(restricted.apply(&pt(0, &[0.3])).is_err());
}

#[test]
fn angle_form_pulls_back_to_twice_itself() {
    let c = Arc::new(circle());
    let f = double_cover(c.clone());
    let w = angle_form(c.clone());
    let pulled = w.pullback(&f).unwrap();
    assert!(pulled.section_law());
    assert!(pulled.verify(42, 50, 1e-9).holds);
    for t in [0.05, 0.3, 0.5, 0.77, 0.99] {
        let v = pulled.at(&pt(0, &[t])).unwrap();
        assert!((v.components[0] - 2.0).abs() < 1e-12);
    }
}

#[test]
fn etale_cotangent_is_functorial() {
    let c = Arc::new(circle());
    let (f, g) = (double_cover(c.clone()), rotation(c.clone(), rat(1, 8)));
    let fg = f.then(&g).unwrap();
    for t in [0.1, 0.45, 0.62, 0.9] {
        let phi = Covector::new(pt(0, &[t]), vec![3.0]);
        let direct = fg.etale_cotangent(&phi).unwrap();
        let stepwise = g.etale_cotangent(&f.etale_cotangent(&phi).unwrap()).unwrap();
        let stepwise = stepwise.change_chart(&c, direct.base.chart).unwrap();
        assert!((direct.components[0] - stepwise.components[0]).abs() < 1e-12);
        assert!(direct.base.same_as(&c, &stepwise.base, 1e-12));
    }
}

fn height_form(s: Arc<revtan::manifold::Atlas>) -> CovectorField {
    let h = height(s.clone());
    let comps = h.reps.iter().map(|r| SmoothMap::new(2, r.map.jacobian().remove(0)).unwrap()).collect();
    CovectorField::from_charts(s, comps).unwrap()
}

#[test]
fn pullback_of_composite_is_iterated_pullback() {
    let c = Arc::new(circle());
    let (f, g) = (double_cover(c.clone()), rotation(c.clone(), rat(1, 8)));
    let w = angle_form(c.clone());
    let once = w.pullback(&f.then(&g).unwrap()).unwrap();
    let twice = w.pullback(&g).unwrap().pullback(&f).unwrap();
    for t in [0.05, 0.2, 0.4, 0.6, 0.8, 0.95] {
        let a = once.at(&pt(0, &[t])).unwrap();
        let b = twice.at(&pt(0, &[t])).unwrap();
        assert!((a.components[0] - b.components[0]).abs() < 1e-9);
    }

    let s = Arc::new(sphere());
    let w = height_form(s.clone());
    assert!(w.verify(42, 50, 1e-9).holds);
    let a = antipodal(s.clone());
    let once = w.pullback(&a.then(&a).unwrap()).unwrap();
    let twice = w.pullback(&a).unwrap().pullback(&a).unwrap();
    assert!(once.section_law() && twice.section_law());
    for x in [[0.3, -0.2], [1.2, 0.4], [-0.9, 1.1]] {
        let p = pt(1, &x);
        let (u, v) = (once.at(&p).unwrap(), twice.at(&p).unwrap());
        let direct = w.at(&p).unwrap();
        for k in 0..2 {
            assert!((u.components[k] - v.components[k]).abs() < 1e-9);
            assert!((u.components[k] - direct.components[k]).abs() < 1e-9);
        }
    }
}

#[test]
fn height_descends_to_the_south_pole() {
    let s = Arc::new(sphere());
    let h = height(s.clone());
    let metric = Metric::euclidean(s.clone());
    let trace = optimize(&h, &metric, sphere_point_from_north(0.1), 0.1, 500, 0.0).unwrap();
    assert!(trace.monotone());
    let e = sphere_embedding(trace.last());
    let dist = (e[0] * e[0] + e[1] * e[1] + (e[2] + 1.0).powi(2)).sqrt();
    assert!(dist < 1e-6, "{dist}");
}

#[test]
fn critical_point_is_fixed() {
    let s = Arc::new(sphere());
    let h = height(s.clone());
    let south = pt(0, &[0.0, 0.0]);
    let step = revtan::manifold::riemannian_gradient_step(&h, &Metric::euclidean(s), &south, 0.1).unwrap();
    assert_eq!(step.point, south);
}

#[test]
fn euclidean_descent_on_a_quadratic_contracts() {
    let r2 = Arc::new(revtan::manifold::library::euclidean(2));
    let h = SmoothMap::parse("(map 2 1 (+ (* 1/2 x0 x0) (* 3/2 x1 x1)))").unwrap();
    let rep = revtan::manifold::Patch::new(0, 0, r2.charts[0].region.clone(), Vec::new(), h);
    let h = ManifoldMap::new("quadratic", r2.clone(), Arc::new(revtan::manifold::library::euclidean(1)), vec![rep]).unwrap();
    let trace = optimize(&h, &Metric::euclidean(r2), pt(0, &[1.0, 1.0]), 0.1, 10, 0.0).unwrap();
    // x ← (1 - 0.1·a) x per coordinate
    let expected = [0.9f64.powi(10), 0.7f64.powi(10)];
    for (a, b) in trace.last().coords.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn duality_pairing_is_preserved(u in -1.5f64..1.5, v in -1.5f64..1.5, a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0) {
        prop_assume!(u * u + v * v > 0.3);
        let s = Arc::new(sphere());
        let f = antipodal(s.clone());
        let x = pt(0, &[u, v]);
        let tv = TangentVec::new(x.clone(), vec![a, b]);
        let fv = f.tangent(&tv).unwrap();
        let phi = Covector::new(fv.base.clone(), vec![c, d]);
        let pulled = f.cotangent(&x, &phi).unwrap();
        prop_assert!((pulled.pair(&tv) - phi.pair(&fv)).abs() < 1e-10);
    }
}
