use proptest::prelude::*;
use revtan::bundle::DualFibrationMap;
use revtan::reverse::{crdc_from_involution, linear_dagger, r_combinator, reverse_tangent_map, LinearInSecond};
use revtan::sample::Compare;
use revtan::scalar::int;
use revtan::tangent::d_combinator;
use revtan::SmoothMap;

fn m(src: &str) -> SmoothMap {
    SmoothMap::parse(src).unwrap()
}

fn cmp() -> Compare {
    Compare::new(5, 50, 1e-10)
}

/// `Jᵀ w` with the Jacobian taken by central differences.
fn fd_vjp(f: &SmoothMap, x: &[f64], w: &[f64]) -> Vec<f64> {
    let h = 1e-6;
    (0..x.len())
        .map(|i| {
            let mut up = x.to_vec();
            let mut down = x.to_vec();
            up[i] += h;
            down[i] -= h;
            let (a, b) = (f.eval(&up).unwrap(), f.eval(&down).unwrap());
            a.iter().zip(&b).zip(w).map(|((p, q), wj)| (p - q) / (2.0 * h) * wj).sum()
        })
        .collect()
}

#[test]
fn vjp_of_product_pair() {
    let f = m("(map 2 2 (* x0 x1) (+ x0 x1))");
    assert_eq!(r_combinator(&f).eval(&[int(2), int(3), int(1), int(1)]).unwrap(), vec![int(4), int(3)]);
}

#[test]
fn vjp_agrees_with_finite_differences() {
    let f = m("(map 3 2 (* x0 (sin x1)) (exp (* x2 x0)))");
    let (x, w) = ([0.3, 1.1, -0.4], [0.5, -2.0]);
    let exact = r_combinator(&f).eval(&[&x[..], &w[..]].concat()).unwrap();
    for (a, b) in exact.iter().zip(fd_vjp(&f, &x, &w)) {
        assert!((a - b).abs() < 1e-7, "{a} vs {b}");
    }
}

#[test]
fn reverse_tangent_keeps_the_point() {
    let f = m("(map 1 2 (* x0 x0) (* 3 x0))");
    let out = reverse_tangent_map(&f).eval(&[int(2), int(1), int(1)]).unwrap();
    assert_eq!(out, vec![int(2), int(7)]);
}

#[test]
fn reconstruction_from_the_dagger() {
    for src in ["(map 2 2 (* x0 x1) (+ x0 x1))", "(map 2 1 (* (sin x0) (exp x1)))", "(map 1 3 x0 (cos x0) (inv (+ 2 (* x0 x0))))"] {
        let f = m(src);
        let a = cmp().maps(&crdc_from_involution(&f), &r_combinator(&f));
        assert!(a.holds, "{src}: {a:?}");
    }
}

#[test]
fn dagger_is_involutive() {
    let g = LinearInSecond::new(m("(map 3 2 (* x0 x1) (+ (* (sin x0) x2) x1))"), 1, &cmp()).unwrap();
    let back = linear_dagger(&linear_dagger(&g));
    assert!(cmp().maps(back.carrier(), g.carrier()).holds);
}

#[test]
fn nonlinear_second_argument_is_rejected() {
    assert!(LinearInSecond::new(m("(map 2 1 (* x1 x1))"), 1, &cmp()).is_err());
    assert!(LinearInSecond::new(m("(map 2 1 (+ x1 1))"), 1, &cmp()).is_err());
}

#[test]
fn reverse_chain_rule_through_dual_composition() {
    let f = m("(map 2 2 (sin x0) (* x0 x1))");
    let g = m("(map 2 1 (exp (+ x0 x1)))");
    let composed = DualFibrationMap::reverse_derivative(&f).then(&DualFibrationMap::reverse_derivative(&g)).unwrap();
    let direct = DualFibrationMap::reverse_derivative(&f.then(&g).unwrap());
    assert!(composed.compare(&direct, &Compare::new(5, 50, 1e-9)).holds);
}

fn poly_map() -> impl Strategy<Value = SmoothMap> {
    let atom = prop_oneof![Just("x0"), Just("x1"), Just("x2"), Just("2"), Just("-1")];
    let term = prop::collection::vec(atom, 1..4).prop_map(|fs| format!("(* {})", fs.join(" ")));
    prop::collection::vec(prop::collection::vec(term, 1..3), 2).prop_map(|comps| {
        let body: Vec<String> = comps.iter().map(|ts| format!("(+ {})", ts.join(" "))).collect();
        SmoothMap::parse(&format!("(map 3 2 {})", body.join(" "))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // ⟨D[F](x, v), w⟩ = ⟨v, R[F](x, w)⟩, exactly
    #[test]
    fn adjoint_identity(f in poly_map(), x in prop::array::uniform3(-4i64..4),
                        v in prop::array::uniform3(-4i64..4), w in prop::array::uniform2(-4i64..4)) {
        let xs: Vec<_> = x.iter().map(|&a| int(a)).collect();
        let vs: Vec<_> = v.iter().map(|&a| int(a)).collect();
        let ws: Vec<_> = w.iter().map(|&a| int(a)).collect();
        let dv = d_combinator(&f).eval(&[xs.clone(), vs.clone()].concat()).unwrap();
        let rw = r_combinator(&f).eval(&[xs, ws.clone()].concat()).unwrap();
        let lhs: revtan::Rational = dv.iter().zip(&ws).map(|(a, b)| a * b).sum();
        let rhs: revtan::Rational = vs.iter().zip(&rw).map(|(a, b)| a * b).sum();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reconstruction_is_exact_on_polynomials(f in poly_map()) {
        prop_assert_eq!(crdc_from_involution(&f).to_polys(), r_combinator(&f).to_polys());
    }
}
