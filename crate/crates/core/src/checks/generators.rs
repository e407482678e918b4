//! The fixed generator suites the law checks run over. Changing any entry
//! bumps [`GENERATOR_VERSION`].

use crate::algebra::{parse_alghom, Algebra, AlgebraMorphism};
use crate::scalar::int;
use crate::smooth::SmoothMap;

pub const GENERATOR_VERSION: u32 = 1;

const SMOOTH: &[(&str, &str)] = &[
    ("id1", "(map 1 1 x0)"),
    ("id2", "(map 2 2 x0 x1)"),
    ("proj0", "(map 2 1 x0)"),
    ("swap", "(map 2 2 x1 x0)"),
    ("const", "(map 2 1 3/2)"),
    ("cubic", "(map 1 1 (+ (* x0 x0 x0) (* -2 x0) 1))"),
    ("prodsum", "(map 2 2 (* x0 x1) (+ x0 x1))"),
    ("quartic", "(map 2 1 (+ (* x0 x0) (* x1 x1 x1) (* 1/3 x0 x1)))"),
    ("sin", "(map 1 1 (sin x0))"),
    ("cos_lift", "(map 1 2 (cos x0) (* x0 x0))"),
    ("exp_pair", "(map 1 2 (exp x0) (* x0 (cos x0)))"),
    ("twist", "(map 2 2 (* (cos x0) x1) (sin (* x0 x1)))"),
    ("exp_sin", "(map 2 1 (exp (sin (+ x0 x1))))"),
    ("sin_exp", "(map 1 1 (sin (exp (* 1/2 x0))))"),
];

/// Named smooth maps: identity, projections, polynomials of degree ≤ 3,
/// and sin/cos/exp composites.
pub fn smooth_maps() -> Vec<(&'static str, SmoothMap)> {
    SMOOTH.iter().map(|&(name, src)| (name, SmoothMap::parse(src).expect("generator parses"))).collect()
}

/// Every pair `(f, g)` with `cod f = dom g`.
pub type Named = (&'static str, SmoothMap);

pub fn composable_pairs(maps: &[Named]) -> Vec<(&Named, &Named)> {
    let mut out = Vec::new();
    for f in maps {
        for g in maps {
            if f.1.cod() == g.1.dom() {
                out.push((f, g));
            }
        }
    }
    out
}

/// `ℚ[x]`, `ℚ[x,y]`, `ℚ[x]/(x²)` and `ℚ[x]/(x³−1)`.
pub fn algebras() -> Vec<(&'static str, Algebra)> {
    vec![
        ("Q[x]", Algebra::polynomial(1)),
        ("Q[x,y]", Algebra::polynomial(2)),
        ("Q[x]/(x^2)", Algebra::quotient(vec![int(0), int(0), int(1)]).unwrap()),
        ("Q[x]/(x^3-1)", Algebra::quotient(vec![int(-1), int(0), int(0), int(1)]).unwrap()),
    ]
}

const MORPHISMS: &[(&str, usize, usize, &str)] = &[
    ("square_plus_one", 0, 0, "x0 -> x0^2 + 1"),
    ("affine", 0, 0, "x0 -> 2*x0 - 1/2"),
    ("into_plane", 0, 1, "x0 -> x0*x1 + x1^2"),
    ("onto_line", 1, 0, "x0 -> x0^3; x1 -> x0 + 1"),
    ("plane_twist", 1, 1, "x0 -> x1; x1 -> x0*x1 - 1"),
    ("nilpotent_scale", 2, 2, "x0 -> 3*x0"),
    ("root_square", 0, 3, "x0 -> x0^2"),
    ("root_frobenius", 3, 3, "x0 -> x0^2"),
    ("root_to_point", 3, 2, "x0 -> 1"),
];

/// Named algebra morphisms between the suite's algebras.
pub fn algebra_morphisms() -> Vec<(&'static str, AlgebraMorphism)> {
    let algs = algebras();
    MORPHISMS
        .iter()
        .map(|&(name, s, t, src)| (name, parse_alghom(src, &algs[s].1, &algs[t].1).expect("generator is well defined")))
        .collect()
}
