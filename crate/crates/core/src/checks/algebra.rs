//! Exact checks of the dual-numbers and Kähler models, the module dual, and
//! derivations.

use crate::algebra::reverse::action_matrix;
use crate::algebra::{
    derivations_reverse_tangent, kahler_tangent, module_dual_involution, total_differential, Algebra, AlgebraMorphism, DualNumbers,
    FreeModuleMorphism, Kahler, PolynomialMap,
};
use crate::laws::{functor_composition, map_laws, object_laws, TangentModel};
use crate::reverse::reverse_tangent_map;
use crate::sample::Sampler;
use crate::tangent::tangent_map;
use crate::QPoly;

use super::generators::{algebra_morphisms, algebras};
use super::{CheckConfig, CheckEntry, Recorder};

const DUALNUM: &str = "dual numbers";
const KAHLER: &str = "Kähler differentials";
const MODULE: &str = "k-linear dual";
const DERIV: &str = "derivations";

fn is_polynomial(a: &Algebra) -> bool {
    a.modulus().is_none() && a.infinitesimals() == 0
}

fn run_model<M: TangentModel>(
    r: &mut Recorder,
    prefix: &str,
    anchor: &str,
    model: &M,
    objects: &[(String, M::Obj)],
    maps: &[(String, M::Map, M::Obj)],
) {
    for (name, a) in objects {
        for (law, ag) in object_laws(model, a) {
            r.record(&format!("{prefix}.{law}"), name, anchor, ag);
        }
    }
    for (name, f, target) in maps {
        for (law, ag) in map_laws(model, f, target) {
            r.record(&format!("{prefix}.{law}"), name, anchor, ag);
        }
    }
    for (fname, f, _) in maps {
        for (gname, g, _) in maps {
            if let Ok(fg) = model.then(f, g) {
                let _ = fg;
                r.record(&format!("{prefix}.functor_composition"), &format!("{fname};{gname}"), anchor, functor_composition(model, f, g));
            }
        }
    }
}

pub(super) fn suite(cfg: &CheckConfig) -> Vec<CheckEntry> {
    let mut r = Recorder::new("algebra", cfg.seed);
    let algs = algebras();
    let morphisms = algebra_morphisms();

    let objects: Vec<(String, Algebra)> = algs.iter().map(|(n, a)| (n.to_string(), a.clone())).collect();
    let maps: Vec<(String, AlgebraMorphism, Algebra)> =
        morphisms.iter().map(|(n, f)| (n.to_string(), f.clone(), f.target().clone())).collect();
    run_model(&mut r, "dualnum", DUALNUM, &DualNumbers, &objects, &maps);
    for (name, a) in &algs {
        let s = crate::algebra::dualnum_structure(a);
        r.exact("dualnum.zero_then_projection", name, DUALNUM, s.z.then(&s.p).is_ok_and(|f| f == AlgebraMorphism::identity(a)));
    }

    // Kähler on polynomial rings; the suite morphisms are pullbacks of
    // polynomial maps
    let kobjects: Vec<(String, usize)> = (1..=3).map(|n| (format!("Q^{n}"), n)).collect();
    let kmaps: Vec<(String, PolynomialMap, usize)> = morphisms
        .iter()
        .filter(|(_, f)| is_polynomial(f.source()) && is_polynomial(f.target()))
        .map(|(n, f)| {
            let p = PolynomialMap::from_pullback(f.clone()).expect("polynomial rings");
            let cod = p.cod();
            (n.to_string(), p, cod)
        })
        .collect();
    run_model(&mut r, "kahler", KAHLER, &Kahler, &kobjects, &kmaps);
    for (name, p, _) in &kmaps {
        let smooth = p.to_smooth();
        let kt = Kahler.tangent(p);
        r.exact("kahler.matches_smooth_tangent", name, KAHLER, tangent_map(&smooth).to_polys().as_deref() == Some(kt.components()));
    }

    differential_relations(&mut r, cfg);
    module_duals(&mut r, cfg);

    for (name, f) in morphisms.iter().filter(|(_, f)| is_polynomial(f.source()) && is_polynomial(f.target())) {
        let (n, m) = (f.source().gens(), f.target().gens());
        let (Ok(rev), Ok(kt)) = (derivations_reverse_tangent(f), kahler_tangent(f)) else {
            r.exact("derivations.generator_formula", name, DERIV, false);
            continue;
        };
        // coefficient of ∂ᵢ in T*(f)(∂ʲ) equals the coefficient of dyⱼ in T(f)(dxᵢ)
        let mut agree = true;
        for j in 0..m {
            for i in 0..n {
                let rev_coef = rev.images()[m + j].coefficients_in(&[m + i]);
                let kahler_coef = kt.images()[n + i].coefficients_in(&[m + j]);
                let one = |c: &std::collections::BTreeMap<Vec<u32>, QPoly>, nvars: usize| {
                    c.get(&vec![1]).map(|p| p.coefficients_in(&[]).into_values().next().unwrap_or_else(|| QPoly::zero(nvars)))
                };
                let a = one(&rev_coef, m + n).map(|p| p.substitute(&restrict(m + n, m)));
                let b = one(&kahler_coef, 2 * m).map(|p| p.substitute(&restrict(2 * m, m)));
                let zero = QPoly::zero(m);
                agree &= a.unwrap_or_else(|| zero.clone()) == b.unwrap_or(zero);
            }
        }
        r.exact("derivations.kahler_pairing", name, DERIV, agree);
        let smooth = PolynomialMap::from_pullback(f.clone()).map(|p| p.to_smooth());
        let matches = smooth.is_ok_and(|s| reverse_tangent_map(&s).to_polys().as_deref() == Some(rev.images()));
        r.exact("derivations.matches_reverse_tangent", name, DERIV, matches);
    }
    let id = AlgebraMorphism::identity(&Algebra::polynomial(2));
    r.exact(
        "derivations.identity",
        "Q[x,y]",
        DERIV,
        derivations_reverse_tangent(&id).is_ok_and(|f| f == AlgebraMorphism::identity(&Algebra::polynomial(4))),
    );
    r.entries
}

/// Images sending the first `keep` variables of an `nvars` ring to
/// themselves in a `keep`-variable ring and the rest to zero.
fn restrict(nvars: usize, keep: usize) -> Vec<QPoly> {
    (0..nvars).map(|i| if i < keep { QPoly::var(keep, i) } else { QPoly::zero(keep) }).collect()
}

/// `d(1) = 0`, additivity and Leibniz on seeded pairs in `ℚ[x, y]`.
fn differential_relations(r: &mut Recorder, cfg: &CheckConfig) {
    const PAIRS: usize = 50;
    let ring = Algebra::polynomial(2);
    let mut sampler = Sampler::new(cfg.seed);
    r.exact("kahler.d_one", "", KAHLER, total_differential(&ring.one()).is_zero());
    let (mut additive, mut leibniz) = (true, true);
    for _ in 0..PAIRS {
        let a = ring.random_element(&mut sampler);
        let b = ring.random_element(&mut sampler);
        let (da, db) = (total_differential(&a), total_differential(&b));
        additive &= total_differential(&a.add(&b)) == da.add(&db);
        leibniz &= total_differential(&a.mul(&b)) == a.widen(4).mul(&db).add(&b.widen(4).mul(&da));
    }
    r.exact("kahler.d_additive", "50_pairs", KAHLER, additive);
    r.exact("kahler.d_leibniz", "50_pairs", KAHLER, leibniz);
}

fn random_module_map(a: &Algebra, rows: usize, cols: usize, sampler: &mut Sampler) -> FreeModuleMorphism {
    let entries = (0..rows).map(|_| (0..cols).map(|_| a.random_element(sampler)).collect()).collect();
    FreeModuleMorphism::new(a.clone(), cols, entries).expect("rows have the stated width")
}

fn module_duals(r: &mut Recorder, cfg: &CheckConfig) {
    let mut sampler = Sampler::new(cfg.seed);
    let fin: Vec<(&str, Algebra)> = algebras().into_iter().filter(|(_, a)| a.is_finite_dimensional()).collect();
    for (name, a) in &fin {
        let (mut involutive, mut linear, mut contravariant) = (true, true, true);
        for _ in 0..10 {
            let g = random_module_map(a, 2, 3, &mut sampler);
            let h = random_module_map(a, 2, 2, &mut sampler);
            let gs = module_dual_involution(&g).unwrap();
            let q = g.to_rational_matrix().unwrap();
            involutive &= gs.transpose() == q;
            let x = a.random_element(&mut sampler);
            // g⊛ ρ₂(x)ᵀ = ρ₃(x)ᵀ g⊛
            let (rs, rr) = (action_matrix(a, 2, &x).unwrap(), action_matrix(a, 3, &x).unwrap());
            linear &= gs.mul(&rs.transpose()) == rr.transpose().mul(&gs);
            let gh = module_dual_involution(&g.then(&h).unwrap()).unwrap();
            contravariant &= gh == gs.mul(&module_dual_involution(&h).unwrap());
        }
        r.exact("module_dual.involutive", name, MODULE, involutive);
        r.exact("module_dual.action_compatible", name, MODULE, linear);
        r.exact("module_dual.contravariant", name, MODULE, contravariant);
        r.exact("module_dual.identity", name, MODULE, {
            let d = a.dim().unwrap();
            module_dual_involution(&FreeModuleMorphism::identity(a, 2)).is_ok_and(|m| m == crate::Matrix::identity(2 * d))
        });
    }
    let sq = &fin.iter().find(|(n, _)| *n == "Q[x]/(x^2)").expect("in the suite").1;
    let x = FreeModuleMorphism::scalar(sq, &sq.gen(0));
    let expected = sq.regular_matrix(&sq.gen(0)).map(|m| m.transpose());
    r.exact("module_dual.multiplication_by_x", "Q[x]/(x^2)", MODULE, module_dual_involution(&x).ok() == expected);
}
