//! `c*: T(T*(A)) → T*(T(A))`, the dual of the canonical flip.
//!
//! The flip `c` is a linear `T(A)`-morphism `𝒯(T(A)) → T̄(𝒯(A))`; dualising
//! it gives `c*`. In coordinates `c` is the identity on fibres, but the
//! fibre pairing of a tangent bundle `T̄(E)` is the derivative of the pairing
//! of `E` (it pairs `u` with `dφ` and `du` with `φ`), so `c*` exchanges the
//! two covector blocks.

use crate::reverse::reverse_tangent_map;
use crate::sample::{Agreement, Compare};
use crate::smooth::SmoothMap;
use crate::tangent::{tangent_map, TangentStructureMaps};

use super::coordinate::{map, vars, CoordBundle, LinearBundleMorphism};
use super::fibration::DualFibrationMap;

#[derive(Clone, Debug)]
pub struct CanonicalFlipStar {
    n: usize,
    flip: LinearBundleMorphism,
    star: DualFibrationMap,
    /// `c*` on total spaces, `T(T*(A)) → T*(T(A))`.
    total: SmoothMap,
}

impl CanonicalFlipStar {
    pub fn new(n: usize) -> Self {
        let c = TangentStructureMaps::new(n).c;
        let tta = CoordBundle::tangent_bundle(2 * n);
        let tbar = CoordBundle::tangent_bundle(n).tangent();
        let flip = LinearBundleMorphism::new(tta, tbar, SmoothMap::identity(2 * n), c).unwrap();
        let star = flip.star();
        let total = star.target().split_map().then(star.fibre()).unwrap();
        CanonicalFlipStar { n, flip, star, total }
    }

    pub fn flip(&self) -> &LinearBundleMorphism {
        &self.flip
    }

    pub fn star(&self) -> &DualFibrationMap {
        &self.star
    }

    pub fn total(&self) -> &SmoothMap {
        &self.total
    }

    /// `c* p*_{T(A)} = T(p*_A)`.
    pub fn triangle(&self, cmp: &Compare) -> Agreement {
        let lhs = self.total.then(self.star.source().q()).unwrap();
        let rhs = tangent_map(CoordBundle::tangent_bundle(self.n).star().q());
        cmp.maps(&lhs, &rhs)
    }

    /// `star(c⁻¹)` on total spaces, `T*(T(A)) → T(T*(A))`.
    pub fn inverse_total(&self) -> SmoothMap {
        let inv = LinearBundleMorphism::new(
            self.flip.target().clone(),
            self.flip.source().clone(),
            SmoothMap::identity(2 * self.n),
            self.flip.total().clone(),
        )
        .unwrap();
        let star = inv.star();
        star.target().split_map().then(star.fibre()).unwrap()
    }

    /// Both composites with `star(c⁻¹)` are identities.
    pub fn inverse_law(&self, cmp: &Compare) -> Agreement {
        let inv = self.inverse_total();
        let id = SmoothMap::identity(4 * self.n);
        Agreement::all([cmp.maps(&self.total.then(&inv).unwrap(), &id), cmp.maps(&inv.then(&self.total).unwrap(), &id)])
    }

    /// Naturality against `f: ℝⁿ → ℝᵐ`: the reverse tangent map of `T(f)`
    /// equals `(c*_B)⁻¹ ; T(T*(f)) ; c*_A` on `T(A) ×_{T(B)} T*(T(B))`.
    pub fn naturality(&self, f: &SmoothMap, cmp: &Compare) -> Agreement {
        assert_eq!(f.dom(), self.n);
        let (n, m) = (f.dom(), f.cod());
        let dom = 2 * n + 2 * m;
        let direct = reverse_tangent_map(&tangent_map(f));

        let inv_b = CanonicalFlipStar::new(m).inverse_total();
        // ((F x, D[F](x, v)), (α, β)) in T*(T(B))
        let tf = tangent_map(f).widen(dom);
        let mut at_b = tf.components().to_vec();
        at_b.extend(vars(2 * n..dom));
        let e = map(dom, at_b).then(&inv_b).unwrap();
        let e = e.components();
        // T(A ×_B T*(B)) = (x, φ, v, dφ)
        let pre = map(dom, [vars(0..n), e[m..2 * m].to_vec(), vars(n..2 * n), e[3 * m..4 * m].to_vec()].concat());
        let via = pre.then(&tangent_map(&reverse_tangent_map(f))).unwrap().then(&self.total).unwrap();
        cmp.maps(&direct, &via)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_and_inverse_hold_exactly() {
        let cs = CanonicalFlipStar::new(1);
        let cmp = Compare::new(1, 20, 0.0);
        assert!(cs.triangle(&cmp).holds);
        assert!(cs.inverse_law(&cmp).holds);
        // c* swaps the two covector blocks
        let out = cs.total().eval(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(out, vec![1.0, 3.0, 4.0, 2.0]);
    }

    #[test]
    fn natural_in_the_base() {
        let f = SmoothMap::parse("(map 2 1 (+ (* x0 x0 x1) (sin x1)))").unwrap();
        let cmp = Compare::new(2, 50, 1e-9);
        assert!(CanonicalFlipStar::new(2).naturality(&f, &cmp).holds);
    }
}
