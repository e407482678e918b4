//! Suites over the smooth generator maps: the ambient category, the forward
//! tangent structure, and the reverse side.

use crate::bundle::DualFibrationMap;
use crate::dual::Dual;
use crate::expr::Expr;
use crate::laws::{functor_composition, map_laws, object_laws, Smooth};
use crate::reverse::{crdc_from_involution, is_linear_in_second, linear_dagger, r_combinator, reverse_tangent_map, LinearInSecond};
use crate::sample::Sampler;
use crate::smooth::SmoothMap;
use crate::tangent::d_combinator;

use super::generators::{composable_pairs, smooth_maps};
use super::{sampled, CheckConfig, CheckEntry, Recorder};

fn anchor_of(law: &str) -> &'static str {
    match law {
        "functor_identity" | "functor_composition" => "tangent functor",
        "p_natural" | "z_natural" | "s_natural" | "l_natural" | "c_natural" => "naturality of the structure maps",
        "zero_section" | "sum_over_base" | "sum_over_base_second" | "sum_commutative" | "sum_unit" | "sum_associative" => {
            "additive bundle (p, s, z)"
        }
        "lift_flip" | "flip_involution" | "flip_projection" => "canonical flip",
        _ => "vertical lift",
    }
}

pub(super) fn smooth_suite(cfg: &CheckConfig) -> Vec<CheckEntry> {
    let mut r = Recorder::new("smooth", cfg.seed);
    let maps = smooth_maps();
    let cmp = cfg.compare();
    for (name, f) in &maps {
        let back = SmoothMap::parse(&f.to_source());
        r.exact("parse_roundtrip", name, "map syntax", back.is_ok_and(|b| b.structurally_equal(f)));

        // forward-mode dual numbers against the symbolic derivative
        let df = d_combinator(f);
        let mut sampler = Sampler::new(cfg.seed);
        let rows = (0..cfg.points).map(|_| {
            let xv = sampler.point(2 * f.dom(), -2.0, 2.0);
            let (x, v) = xv.split_at(f.dom());
            let lifted: Vec<Dual<f64>> = x.iter().zip(v).map(|(&a, &b)| Dual::new(a, b)).collect();
            let forward: Vec<f64> = f.eval(&lifted).map(|o| o.into_iter().map(|d| d.eps).collect()).unwrap_or_default();
            let symbolic = df.eval(&xv).unwrap_or_default();
            (xv, symbolic, forward)
        });
        r.record("derivative_matches_dual_numbers", name, "partial derivatives", sampled(cfg.tol, rows.collect::<Vec<_>>()));

        for i in 0..f.dom() {
            for j in i + 1..f.dom() {
                let a = f.partial(i).and_then(|d| d.partial(j));
                let b = f.partial(j).and_then(|d| d.partial(i));
                let case = format!("{name},{i},{j}");
                match (a, b) {
                    (Ok(a), Ok(b)) => r.record("mixed_partials_commute", &case, "partial derivatives", cmp.maps(&a, &b)),
                    (Err(e), _) | (_, Err(e)) => r.error("mixed_partials_commute", &case, "partial derivatives", &e),
                }
            }
        }
    }
    let pairs = composable_pairs(&maps);
    for ((fname, f), (gname, g)) in &pairs {
        let fg = f.then(g).expect("composable");
        let mut sampler = Sampler::new(cfg.seed);
        let rows = (0..cfg.points).map(|_| {
            let x = sampler.point(f.dom(), -2.0, 2.0);
            let direct = fg.eval(&x).unwrap_or_default();
            let stepwise = f.eval(&x).and_then(|y| g.eval(&y)).unwrap_or_default();
            (x, direct, stepwise)
        });
        r.record("compose_evaluates", &format!("{fname};{gname}"), "composition", sampled(cfg.tol, rows.collect::<Vec<_>>()));
    }
    for ((fname, f), (gname, g)) in &pairs {
        for (hname, h) in maps.iter().filter(|(_, h)| h.dom() == g.cod()) {
            let left = f.then(g).and_then(|fg| fg.then(h)).unwrap();
            let right = g.then(h).and_then(|gh| f.then(&gh)).unwrap();
            r.record("compose_associative", &format!("{fname};{gname};{hname}"), "composition", cmp.numeric(&left, &right));
        }
    }
    r.entries
}

pub(super) fn forward_suite(cfg: &CheckConfig) -> Vec<CheckEntry> {
    let mut r = Recorder::new("forward", cfg.seed);
    let model = Smooth { cmp: cfg.compare() };
    for n in 1..=3 {
        for (law, a) in object_laws(&model, &n) {
            r.record(law, &format!("R^{n}"), anchor_of(law), a);
        }
    }
    let maps = smooth_maps();
    for (name, f) in &maps {
        for (law, a) in map_laws(&model, f, &f.cod()) {
            r.record(law, name, anchor_of(law), a);
        }
        let lin = is_linear_in_second(&d_combinator(f), f.dom(), &model.cmp);
        r.record("derivative_linear", name, "differential combinator", lin.agreement);
    }
    for ((fname, f), (gname, g)) in composable_pairs(&maps) {
        r.record("functor_composition", &format!("{fname};{gname}"), "tangent functor", functor_composition(&model, f, g));
    }
    r.entries
}

/// `(x, v, w) ↦ ⟨D[F](x, v), w⟩` and `(x, v, w) ↦ ⟨v, R[F](x, w)⟩`.
fn adjoint_sides(f: &SmoothMap) -> (SmoothMap, SmoothMap) {
    let (n, m) = (f.dom(), f.cod());
    let dom = 2 * n + m;
    let x: Vec<Expr> = (0..n).map(Expr::var).collect();
    let v: Vec<Expr> = (n..2 * n).map(Expr::var).collect();
    let w: Vec<Expr> = (2 * n..dom).map(Expr::var).collect();
    let d = d_combinator(f);
    let r = r_combinator(f);
    let dv: Vec<Expr> = d.components().iter().map(|c| c.substitute(&[x.clone(), v.clone()].concat())).collect();
    let rw: Vec<Expr> = r.components().iter().map(|c| c.substitute(&[x.clone(), w.clone()].concat())).collect();
    let dot = |a: &[Expr], b: &[Expr]| Expr::sum(a.iter().zip(b).map(|(p, q)| p.mul(q)));
    (SmoothMap::new(dom, vec![dot(&dv, &w)]).unwrap(), SmoothMap::new(dom, vec![dot(&v, &rw)]).unwrap())
}

pub(super) fn reverse_suite(cfg: &CheckConfig) -> Vec<CheckEntry> {
    let mut r = Recorder::new("reverse", cfg.seed);
    let (cmp, tight) = (cfg.compare(), cfg.tight());
    let maps = smooth_maps();
    for (name, f) in &maps {
        let (n, m) = (f.dom(), f.cod());
        let (lhs, rhs) = adjoint_sides(f);
        r.record("adjoint", name, "reverse derivative", tight.maps(&lhs, &rhs));
        r.record("reverse_linear", name, "linear in the second argument", is_linear_in_second(&r_combinator(f), n, &cmp).agreement);
        r.record("crdc_reconstruction", name, "reverse differential combinator", tight.maps(&crdc_from_involution(f), &r_combinator(f)));

        let g = LinearInSecond::assume(d_combinator(f), n);
        let gdd = linear_dagger(&linear_dagger(&g));
        r.record("dagger_involution", name, "linear dagger", tight.maps(gdd.carrier(), g.carrier()));
        // h(x, b)_j = x₀ b_j + b_{j+1}, linear in b
        let hcomps = (0..m).map(|j| Expr::var(0).mul(&Expr::var(n + j)).add(&Expr::var(n + (j + 1) % m))).collect();
        let h = LinearInSecond::assume(SmoothMap::new(n + m, hcomps).unwrap(), n);
        let gh = g.then(&h).expect("same context");
        let contra = linear_dagger(&h).then(&linear_dagger(&g)).expect("same context");
        r.record("dagger_contravariant", name, "linear dagger", tight.maps(linear_dagger(&gh).carrier(), contra.carrier()));

        let base = reverse_tangent_map(f).then(&SmoothMap::block(2 * n, 0, n)).unwrap();
        r.record("reverse_tangent_over_base", name, "reverse tangent bundle", cmp.maps(&base, &SmoothMap::block(n + m, 0, n)));
    }
    for ((fname, f), (gname, g)) in composable_pairs(&maps) {
        let composed = DualFibrationMap::reverse_derivative(f).then(&DualFibrationMap::reverse_derivative(g));
        let direct = DualFibrationMap::reverse_derivative(&f.then(g).unwrap());
        let case = format!("{fname};{gname}");
        match composed {
            Ok(c) => r.record("chain_rule", &case, "dual fibration composition", cmp.maps(c.fibre(), direct.fibre())),
            Err(e) => r.error("chain_rule", &case, "dual fibration composition", &e),
        }
    }
    r.entries
}
