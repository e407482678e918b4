use std::sync::Arc;

use proptest::prelude::*;
use revtan::bundle::{factor_through_pullback, CanonicalFlipStar, CocycleBundle, CoordBundle, DualFibrationMap, LinearBundleMorphism};
use revtan::manifold::library::{circle, double_cover, mobius, sphere};
use revtan::sample::{Agreement, Compare};
use revtan::SmoothMap;

fn m(src: &str) -> SmoothMap {
    SmoothMap::parse(src).unwrap()
}

fn cmp() -> Compare {
    Compare::new(17, 50, 1e-9)
}

fn all_hold(laws: &[(String, Agreement)]) {
    for (name, a) in laws {
        assert!(a.holds, "{name}: {a:?}");
    }
}

#[test]
fn trivial_and_tangent_bundles_satisfy_the_axioms() {
    all_hold(&CoordBundle::trivial(2, 3).verify_axioms(&cmp()));
    all_hold(&CoordBundle::tangent_bundle(2).verify_axioms(&cmp()));
    all_hold(&CoordBundle::tangent_bundle(1).tangent().verify_axioms(&cmp()));
}

#[test]
fn pullback_is_cartesian_and_invertible_on_fibres() {
    let f = m("(map 2 1 (* x0 (sin x1)))");
    let e = CoordBundle::tangent_bundle(1);
    let (pb, cart) = e.pullback(&f).unwrap();
    all_hold(&pb.verify_axioms(&cmp()));
    all_hold(&cart.verify(&cmp()));
    // (f, cart) dualises to a Cartesian map whose fibre part inverts
    let star = cart.star();
    let (g_inv, forward) = star.cartesian_inverse().unwrap();
    assert_eq!(g_inv.dom(), star.source().total_dim());
    all_hold(&forward.verify(&cmp()));
}

#[test]
fn factorization_through_the_pullback() {
    let f = m("(map 1 1 (exp x0))");
    let u = m("(map 2 1 (+ x0 x1))");
    let e = CoordBundle::tangent_bundle(1);
    let (pb, cart) = e.pullback(&f).unwrap();
    // T(u f) as a morphism over u f, then factor it through f*E
    let uf = u.then(&f).unwrap();
    let t = LinearBundleMorphism::new(CoordBundle::trivial(2, 1), e.clone(), uf.clone(), {
        let d = revtan::tangent::tangent_map(&m("(map 1 1 (exp x0))"));
        let to_t = m("(map 3 2 (+ x0 x1) x2)");
        to_t.then(&d).unwrap()
    })
    .unwrap();
    let k = factor_through_pullback(&t, &u, &pb).unwrap();
    let back = k.then(&cart).unwrap();
    assert!(cmp().maps(back.total(), t.total()).holds);
}

#[test]
fn dual_composition_has_units_and_associates() {
    let fs = [m("(map 2 2 (sin x0) (* x0 x1))"), m("(map 2 1 (exp (+ x0 x1)))"), m("(map 1 2 x0 (* x0 x0))")];
    let d: Vec<_> = fs.iter().map(DualFibrationMap::reverse_derivative).collect();
    let left = DualFibrationMap::identity(d[0].source()).then(&d[0]).unwrap();
    assert!(left.compare(&d[0], &cmp()).holds);
    let right = d[0].then(&DualFibrationMap::identity(d[0].target())).unwrap();
    assert!(right.compare(&d[0], &cmp()).holds);
    let ab_c = d[0].then(&d[1]).unwrap().then(&d[2]).unwrap();
    let a_bc = d[0].then(&d[1].then(&d[2]).unwrap()).unwrap();
    assert!(ab_c.compare(&a_bc, &cmp()).holds);
}

#[test]
fn canonical_flip_star() {
    for n in 1..=3 {
        let c = CanonicalFlipStar::new(n);
        assert!(c.triangle(&cmp()).holds, "triangle at {n}");
        assert!(c.inverse_law(&cmp()).holds, "inverse at {n}");
        assert!(
            c.naturality(&m(&format!("(map {n} {n} {})", (0..n).map(|i| format!("(sin x{i})")).collect::<Vec<_>>().join(" "))), &cmp())
                .holds
        );
    }
}

#[test]
fn mobius_bundle_and_its_corruption() {
    let c = Arc::new(circle());
    let good = mobius(c.clone(), -1);
    all_hold(&good.verify_axioms(42, 50, 1e-9));
    let bad = mobius(c.clone(), 2);
    let broken: Vec<_> = bad.verify_axioms(42, 50, 1e-9).into_iter().filter(|(_, a)| !a.holds).collect();
    assert!(broken.iter().any(|(name, _)| name.contains("cocycle")), "{broken:?}");
    // pulled back along θ ↦ 2θ it is again a valid cocycle bundle
    let pulled = good.pullback(&double_cover(c)).unwrap();
    all_hold(&pulled.verify_axioms(42, 50, 1e-9));
}

#[test]
fn sphere_tangent_and_cotangent_bundles() {
    let t = CocycleBundle::tangent_bundle(Arc::new(sphere()));
    all_hold(&t.verify_axioms(42, 50, 1e-9));
    let ts = t.star();
    assert!(ts.is_dual() && !t.is_dual());
    all_hold(&ts.verify_axioms(42, 50, 1e-9));
    // the dual of a cotangent transition is the original transition
    let x = [0.9, 0.3];
    let (g, gss) = (t.transition_at(0, 1, &x).unwrap(), ts.star().transition_at(0, 1, &x).unwrap());
    for i in 0..2 {
        for j in 0..2 {
            assert!((g[(i, j)] - gss[(i, j)]).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // (f, g)** = (f, g) for linear bundle morphisms of trivial bundles
    #[test]
    fn double_star_of_a_linear_morphism(a in -3i64..3, b in -3i64..3, c in -3i64..3) {
        let total = m(&format!("(map 3 3 (sin x0) (+ (* {a} x1) (* {b} x0 x2)) (+ x1 (* {c} x2)))"));
        let src = CoordBundle::trivial(1, 2);
        let f = LinearBundleMorphism::new(src.clone(), src, m("(map 1 1 (sin x0))"), total).unwrap();
        let twice = f.star().star();
        prop_assert!(cmp().maps(twice.base(), f.base()).holds);
        prop_assert!(cmp().maps(twice.total(), f.total()).holds);
    }
}
