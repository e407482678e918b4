//! Two tangent structures on commutative algebras.
//!
//! Dual numbers act covariantly: `T(A) = A[ε]` and the structure maps are
//! algebra morphisms. Kähler differentials act on affine schemes: a map
//! `ℚⁿ → ℚᵐ` is presented by its pullback `ℚ[y] → ℚ[x]`, `T(ℚ[x]) = ℚ[x, dx]`,
//! and every structure map is the pullback of its Euclidean counterpart.

use crate::error::{Error, Result};
use crate::laws::TangentModel;
use crate::sample::{Agreement, Method};
use crate::smooth::SmoothMap;
use crate::QPoly;

use super::ring::{Algebra, AlgebraMorphism};

fn morphism(source: &Algebra, target: &Algebra, images: Vec<QPoly>) -> AlgebraMorphism {
    AlgebraMorphism::new(source.clone(), target.clone(), images).expect("structure map is well defined")
}

fn exact(holds: bool) -> Agreement {
    Agreement::exact(Method::Exact, holds)
}

/// `T(f)(a + bε) = f(a) + f(b)ε`.
pub fn dualnum_tangent(f: &AlgebraMorphism) -> AlgebraMorphism {
    let (ta, tb) = (f.source().with_infinitesimal(), f.target().with_infinitesimal());
    let mut images: Vec<QPoly> = f.images().iter().map(|p| p.widen(tb.gens())).collect();
    images.push(tb.gen(tb.gens() - 1));
    morphism(&ta, &tb, images)
}

/// `T₂(f)` on `A[ε, ε′]` with `εε′ = 0`.
pub fn dualnum_tangent_pullback(f: &AlgebraMorphism) -> AlgebraMorphism {
    let (ta, tb) = (f.source().with_orthogonal(2), f.target().with_orthogonal(2));
    let g = f.target().gens();
    let mut images: Vec<QPoly> = f.images().iter().map(|p| p.widen(g + 2)).collect();
    images.extend([tb.gen(g), tb.gen(g + 1)]);
    morphism(&ta, &tb, images)
}

/// Generators of `a` followed by `extra`, in the ring `target`.
fn keep_then(a: &Algebra, target: &Algebra, extra: Vec<QPoly>) -> Vec<QPoly> {
    (0..a.gens()).map(|i| target.gen(i)).chain(extra).collect()
}

/// The structure maps of the dual-numbers model at `A`. The new
/// infinitesimal of `T(A)` is `ε`; `T²(A)` adds `ε′` as the outer one.
#[derive(Clone, Debug)]
pub struct DualNumberStructure {
    /// `a + bε ↦ a`
    pub p: AlgebraMorphism,
    /// `a ↦ a`
    pub z: AlgebraMorphism,
    /// `ε, ε′ ↦ ε`
    pub s: AlgebraMorphism,
    /// `ε ↦ εε′`
    pub l: AlgebraMorphism,
    /// `ε ↔ ε′`
    pub c: AlgebraMorphism,
}

pub fn dualnum_structure(a: &Algebra) -> DualNumberStructure {
    let g = a.gens();
    let t = a.with_infinitesimal();
    let tt = t.with_infinitesimal();
    let t2 = a.with_orthogonal(2);
    DualNumberStructure {
        p: morphism(&t, a, keep_then(a, a, vec![a.zero()])),
        z: morphism(a, &t, keep_then(a, &t, vec![])),
        s: morphism(&t2, &t, keep_then(a, &t, vec![t.gen(g), t.gen(g)])),
        l: morphism(&t, &tt, keep_then(a, &tt, vec![tt.gen(g).mul(&tt.gen(g + 1))])),
        c: morphism(&tt, &tt, keep_then(a, &tt, vec![tt.gen(g + 1), tt.gen(g)])),
    }
}

/// The dual-numbers tangent structure on commutative ℚ-algebras.
pub struct DualNumbers;

impl TangentModel for DualNumbers {
    type Obj = Algebra;
    type Map = AlgebraMorphism;

    fn source(&self, f: &AlgebraMorphism) -> Algebra {
        f.source().clone()
    }

    fn identity(&self, a: &Algebra) -> AlgebraMorphism {
        AlgebraMorphism::identity(a)
    }

    fn then(&self, f: &AlgebraMorphism, g: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        f.then(g)
    }

    fn compare(&self, f: &AlgebraMorphism, g: &AlgebraMorphism) -> Agreement {
        exact(f == g)
    }

    fn tangent_obj(&self, a: &Algebra) -> Algebra {
        a.with_infinitesimal()
    }

    fn tangent(&self, f: &AlgebraMorphism) -> AlgebraMorphism {
        dualnum_tangent(f)
    }

    fn tangent_pullback(&self, f: &AlgebraMorphism) -> AlgebraMorphism {
        dualnum_tangent_pullback(f)
    }

    fn p(&self, a: &Algebra) -> AlgebraMorphism {
        dualnum_structure(a).p
    }

    fn z(&self, a: &Algebra) -> AlgebraMorphism {
        dualnum_structure(a).z
    }

    fn s(&self, a: &Algebra) -> AlgebraMorphism {
        dualnum_structure(a).s
    }

    fn l(&self, a: &Algebra) -> AlgebraMorphism {
        dualnum_structure(a).l
    }

    fn c(&self, a: &Algebra) -> AlgebraMorphism {
        dualnum_structure(a).c
    }

    fn pi(&self, a: &Algebra, i: usize) -> AlgebraMorphism {
        let (t2, t) = (a.with_orthogonal(2), a.with_infinitesimal());
        let g = a.gens();
        let eps = |j: usize| if j == i { t.gen(g) } else { t.zero() };
        morphism(&t2, &t, keep_then(a, &t, vec![eps(0), eps(1)]))
    }

    fn unit_pair(&self, a: &Algebra) -> AlgebraMorphism {
        let (t, t2) = (a.with_infinitesimal(), a.with_orthogonal(2));
        morphism(&t, &t2, keep_then(a, &t2, vec![t2.gen(a.gens())]))
    }

    fn swap(&self, a: &Algebra) -> AlgebraMorphism {
        let t2 = a.with_orthogonal(2);
        let g = a.gens();
        morphism(&t2, &t2, keep_then(a, &t2, vec![t2.gen(g + 1), t2.gen(g)]))
    }

    fn sum_left(&self, a: &Algebra) -> AlgebraMorphism {
        let (t3, t2) = (a.with_orthogonal(3), a.with_orthogonal(2));
        let g = a.gens();
        morphism(&t3, &t2, keep_then(a, &t2, vec![t2.gen(g), t2.gen(g), t2.gen(g + 1)]))
    }

    fn sum_right(&self, a: &Algebra) -> AlgebraMorphism {
        let (t3, t2) = (a.with_orthogonal(3), a.with_orthogonal(2));
        let g = a.gens();
        morphism(&t3, &t2, keep_then(a, &t2, vec![t2.gen(g), t2.gen(g + 1), t2.gen(g + 1)]))
    }
}

/// `d(p) = Σ ∂p/∂xᵢ · dxᵢ` in `ℚ[x, dx]`.
pub fn total_differential(p: &QPoly) -> QPoly {
    let n = p.nvars();
    (0..n).fold(QPoly::zero(2 * n), |acc, i| acc.add(&p.partial(i).widen(2 * n).mul(&QPoly::var(2 * n, n + i))))
}

/// A polynomial map `ℚⁿ → ℚᵐ`, presented by its pullback `ℚ[y₁..y_m] → ℚ[x₁..x_n]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMap {
    pullback: AlgebraMorphism,
}

impl PolynomialMap {
    /// Components `f_j ∈ ℚ[x₁..x_n]`.
    pub fn new(n: usize, components: Vec<QPoly>) -> Result<Self> {
        let pullback = AlgebraMorphism::new(Algebra::polynomial(components.len()), Algebra::polynomial(n), components)?;
        Ok(PolynomialMap { pullback })
    }

    /// Maps between polynomial rings only.
    pub fn from_pullback(pullback: AlgebraMorphism) -> Result<Self> {
        let plain = |a: &Algebra| a.modulus().is_none() && a.infinitesimals() == 0;
        if !plain(pullback.source()) || !plain(pullback.target()) {
            return Err(Error::Unsupported("Kähler tangent of a non-polynomial algebra".into()));
        }
        Ok(PolynomialMap { pullback })
    }

    pub fn from_smooth(f: &SmoothMap) -> Result<Self> {
        let polys = f.to_polys().ok_or_else(|| Error::Unsupported("map is not polynomial".into()))?;
        PolynomialMap::new(f.dom(), polys)
    }

    pub fn to_smooth(&self) -> SmoothMap {
        let comps = self.components().iter().map(crate::expr::Expr::from_poly).collect();
        SmoothMap::new(self.dom(), comps).expect("components live in the source ring")
    }

    pub fn identity(n: usize) -> Self {
        PolynomialMap { pullback: AlgebraMorphism::identity(&Algebra::polynomial(n)) }
    }

    pub fn dom(&self) -> usize {
        self.pullback.target().gens()
    }

    pub fn cod(&self) -> usize {
        self.pullback.source().gens()
    }

    pub fn pullback(&self) -> &AlgebraMorphism {
        &self.pullback
    }

    pub fn components(&self) -> &[QPoly] {
        self.pullback.images()
    }

    /// First `self`, then `g`: the pullbacks compose the other way.
    pub fn then(&self, g: &PolynomialMap) -> Result<PolynomialMap> {
        Ok(PolynomialMap { pullback: g.pullback.then(&self.pullback)? })
    }
}

/// `T(f)(y) = f(y)`, `T(f)(dy) = d(f(y))`, as a map `ℚ[y, dy] → ℚ[x, dx]`.
pub fn kahler_tangent(f: &AlgebraMorphism) -> Result<AlgebraMorphism> {
    PolynomialMap::from_pullback(f.clone())?;
    let two_n = 2 * f.target().gens();
    let mut images: Vec<QPoly> = f.images().iter().map(|p| p.widen(two_n)).collect();
    images.extend(f.images().iter().map(total_differential));
    AlgebraMorphism::new(Algebra::polynomial(2 * f.source().gens()), Algebra::polynomial(two_n), images)
}

/// The Kähler-differentials tangent structure on polynomial maps.
pub struct Kahler;

/// Pullback of the linear map sending `(x, blocks…)` to the listed sums of
/// input blocks, each output block given by the input blocks it adds.
fn block_map(n: usize, in_blocks: usize, out: &[&[usize]]) -> PolynomialMap {
    let dom = n * in_blocks;
    let comps = out
        .iter()
        .flat_map(|sum| (0..n).map(move |i| sum.iter().fold(QPoly::zero(dom), |acc, &b| acc.add(&QPoly::var(dom, b * n + i)))))
        .collect();
    PolynomialMap::new(dom, comps).unwrap()
}

impl TangentModel for Kahler {
    type Obj = usize;
    type Map = PolynomialMap;

    fn source(&self, f: &PolynomialMap) -> usize {
        f.dom()
    }

    fn identity(&self, a: &usize) -> PolynomialMap {
        PolynomialMap::identity(*a)
    }

    fn then(&self, f: &PolynomialMap, g: &PolynomialMap) -> Result<PolynomialMap> {
        f.then(g)
    }

    fn compare(&self, f: &PolynomialMap, g: &PolynomialMap) -> Agreement {
        exact(f == g)
    }

    fn tangent_obj(&self, a: &usize) -> usize {
        2 * a
    }

    fn tangent(&self, f: &PolynomialMap) -> PolynomialMap {
        PolynomialMap { pullback: kahler_tangent(&f.pullback).expect("polynomial map") }
    }

    fn tangent_pullback(&self, f: &PolynomialMap) -> PolynomialMap {
        let n = f.dom();
        let dom = 3 * n;
        let along = |block: usize| {
            let place: Vec<usize> = (0..n).chain(block * n..(block + 1) * n).collect();
            total_differential_components(f).into_iter().map(move |d| d.embed(dom, &place))
        };
        let mut comps: Vec<QPoly> = f.components().iter().map(|p| p.widen(dom)).collect();
        comps.extend(along(1));
        comps.extend(along(2));
        PolynomialMap::new(dom, comps).unwrap()
    }

    fn p(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 2, &[&[0]])
    }

    fn z(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 1, &[&[0], &[]])
    }

    fn s(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 3, &[&[0], &[1, 2]])
    }

    fn l(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 2, &[&[0], &[], &[], &[1]])
    }

    fn c(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 4, &[&[0], &[2], &[1], &[3]])
    }

    fn pi(&self, a: &usize, i: usize) -> PolynomialMap {
        block_map(*a, 3, &[&[0], &[1 + i]])
    }

    fn unit_pair(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 2, &[&[0], &[1], &[]])
    }

    fn swap(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 3, &[&[0], &[2], &[1]])
    }

    fn sum_left(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 4, &[&[0], &[1, 2], &[3]])
    }

    fn sum_right(&self, a: &usize) -> PolynomialMap {
        block_map(*a, 4, &[&[0], &[1], &[2, 3]])
    }
}

fn total_differential_components(f: &PolynomialMap) -> Vec<QPoly> {
    f.components().iter().map(total_differential).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::{functor_composition, map_laws, object_laws};
    use crate::scalar::{int, rat};

    fn x(n: usize, i: usize) -> QPoly {
        QPoly::var(n, i)
    }

    #[test]
    fn dual_numbers_on_a_quotient() {
        let a = Algebra::quotient(vec![int(0), int(0), int(1)]).unwrap();
        let f = AlgebraMorphism::new(a.clone(), a.clone(), vec![a.gen(0).add(&a.gen(0).pow(2))]).unwrap();
        assert_eq!(f, AlgebraMorphism::identity(&a));
        let tf = dualnum_tangent(&f);
        let t = a.with_infinitesimal();
        // a + bε with a = 1 + x, b = x
        let elem = t.one().add(&t.gen(0)).add(&t.gen(0).mul(&t.gen(1)));
        assert_eq!(tf.apply(&elem), t.reduce(&elem));
    }

    #[test]
    fn dual_number_laws_hold_exactly() {
        let q = Algebra::quotient(vec![int(-1), int(0), int(0), int(1)]).unwrap();
        for a in [Algebra::polynomial(1), q.clone()] {
            for (name, ag) in object_laws(&DualNumbers, &a) {
                assert!(ag.holds, "{name} at {a}");
            }
        }
        let f = AlgebraMorphism::new(Algebra::polynomial(1), q.clone(), vec![q.gen(0).pow(2)]).unwrap();
        for (name, ag) in map_laws(&DualNumbers, &f, &q) {
            assert!(ag.holds, "{name}");
        }
    }

    #[test]
    fn kahler_tangent_of_square() {
        let f = AlgebraMorphism::new(Algebra::polynomial(1), Algebra::polynomial(1), vec![x(1, 0).pow(2)]).unwrap();
        let tf = kahler_tangent(&f).unwrap();
        assert_eq!(tf.images()[1], x(2, 0).mul(&x(2, 1)).scale(&int(2)));
        let d = total_differential(&x(1, 0).pow(3).add(&x(1, 0).scale(&int(2))));
        assert_eq!(d, x(2, 0).pow(2).scale(&int(3)).add(&QPoly::constant(2, int(2))).mul(&x(2, 1)));
        assert!(total_differential(&QPoly::one(2)).is_zero());
    }

    #[test]
    fn kahler_laws_hold_exactly() {
        for n in 1..=2 {
            for (name, ag) in object_laws(&Kahler, &n) {
                assert!(ag.holds, "{name} at {n}");
            }
        }
        let f = PolynomialMap::new(2, vec![x(2, 0).mul(&x(2, 1)), x(2, 1).scale(&rat(1, 2))]).unwrap();
        for (name, ag) in map_laws(&Kahler, &f, &2) {
            assert!(ag.holds, "{name}");
        }
        let g = PolynomialMap::new(2, vec![x(2, 0).add(&x(2, 1).pow(2))]).unwrap();
        assert!(functor_composition(&Kahler, &f, &g).holds);
    }
}
