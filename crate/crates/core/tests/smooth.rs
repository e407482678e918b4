use proptest::prelude::*;
use revtan::scalar::{int, rat};
use revtan::{Dual64, Error, Expr, SmoothMap};

fn m(src: &str) -> SmoothMap {
    SmoothMap::parse(src).unwrap()
}

#[test]
fn exact_evaluation_of_rational_maps() {
    let f = m("(map 2 2 (* x0 x1) (inv (+ x0 x1)))");
    assert_eq!(f.eval_exact(&[rat(1, 2), int(3)]).unwrap(), vec![rat(3, 2), rat(2, 7)]);
    assert!(matches!(f.eval_exact(&[int(1), int(-1)]), Err(Error::DivisionByZero)));
    let g = m("(map 1 1 (sin x0))");
    assert!(g.eval_exact(&[int(1)]).is_err());
    assert_eq!(g.eval_exact(&[int(0)]).unwrap(), vec![int(0)]);
}

#[test]
fn the_same_map_over_several_scalars() {
    let f = m("(map 2 1 (* (exp x0) (cos x1)))");
    let x64 = f.eval(&[0.25f64, -1.5]).unwrap()[0];
    let x32 = f.eval(&[0.25f32, -1.5]).unwrap()[0];
    assert!((x64 - 0.25f64.exp() * (-1.5f64).cos()).abs() < 1e-15);
    assert!((f64::from(x32) - x64).abs() < 1e-6);
    let d = f.eval(&[Dual64::variable(0.25), Dual64::constant(-1.5)]).unwrap();
    assert!((d[0].eps - x64).abs() < 1e-15, "∂/∂x0 of exp(x0)cos(x1) is itself");
}

#[test]
fn dimension_errors() {
    assert!(matches!(SmoothMap::parse("(map 2 1 x0 x1)"), Err(Error::Dimension { .. })));
    assert!(matches!(SmoothMap::parse("(map 1 1 x1)"), Err(Error::UnboundVariable { index: 1, dim: 1 })));
    let f = m("(map 2 1 x0)");
    assert!(f.eval(&[1.0]).is_err());
    assert!(f.then(&m("(map 2 1 x1)")).is_err());
}

#[test]
fn composition_is_diagrammatic() {
    let f = m("(map 1 2 x0 (* 2 x0))");
    let g = m("(map 2 1 (+ x0 (* x1 x1)))");
    let fg = f.then(&g).unwrap();
    assert_eq!(fg.eval_exact(&[int(3)]).unwrap(), vec![int(39)]);
}

#[test]
fn jacobian_entries() {
    let f = m("(map 2 1 (* x0 x0 x1))");
    let j = f.jacobian();
    let at = |e: &Expr| e.eval(&[int(3), int(5)]).unwrap();
    assert_eq!((at(&j[0][0]), at(&j[0][1])), (int(30), int(9)));
}

fn expr_source(depth: u32) -> BoxedStrategy<String> {
    let leaf = prop_oneof![Just("x0".to_string()), Just("x1".to_string()), (-5i64..6).prop_map(|k| k.to_string()), Just("3/4".to_string())];
    leaf.prop_recursive(depth, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| format!("(+ {})", v.join(" "))),
            prop::collection::vec(inner.clone(), 2..3).prop_map(|v| format!("(* {})", v.join(" "))),
            inner.clone().prop_map(|e| format!("(sin {e})")),
            inner.clone().prop_map(|e| format!("(neg {e})")),
            inner.prop_map(|e| format!("(exp (* 1/4 {e}))")),
        ]
    })
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn printing_round_trips(body in expr_source(3), x in prop::array::uniform2(-1.0f64..1.0)) {
        let f = m(&format!("(map 2 1 {body})"));
        let g = m(&f.to_source());
        let (a, b) = (f.eval(&x).unwrap()[0], g.eval(&x).unwrap()[0]);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn composition_evaluates_pointwise(a in expr_source(2), b in expr_source(2), c in expr_source(2),
                                       x in prop::array::uniform2(-1.0f64..1.0)) {
        let f = m(&format!("(map 2 2 {a} {b})"));
        let g = m(&format!("(map 2 1 {c})"));
        let direct = g.eval(&f.eval(&x).unwrap()).unwrap()[0];
        let composed = f.then(&g).unwrap().eval(&x).unwrap()[0];
        prop_assert!((direct - composed).abs() <= 1e-9 * direct.abs().max(1.0));
    }
}
