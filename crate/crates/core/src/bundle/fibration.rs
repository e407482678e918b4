//! The dual fibration: lens-shaped pairs `(f: A → A', g: A ×_{A'} E' → E)`.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::reverse::r_combinator;
use crate::sample::{Agreement, Compare};
use crate::smooth::SmoothMap;

use super::coordinate::{dual_matrix, fibre_jacobian, inverse_matrix, map, mat_vec, vars, CoordBundle, LinearBundleMorphism};

#[derive(Clone, Debug)]
pub struct DualFibrationMap {
    source: CoordBundle,
    target: CoordBundle,
    base: SmoothMap,
    /// On pullback coordinates `(a, u')`, landing in `E`'s total space.
    fibre: SmoothMap,
}

impl DualFibrationMap {
    pub fn new(source: CoordBundle, target: CoordBundle, base: SmoothMap, fibre: SmoothMap) -> Result<Self> {
        if base.dom() != source.base_dim() || base.cod() != target.base_dim() {
            return Err(Error::BaseMismatch(format!(
                "base map {}→{} between bases R^{} and R^{}",
                base.dom(),
                base.cod(),
                source.base_dim(),
                target.base_dim()
            )));
        }
        let pb = source.base_dim() + target.fibre_dim();
        if fibre.dom() != pb || fibre.cod() != source.total_dim() {
            return Err(Error::dim("fibre map", source.total_dim(), fibre.cod()));
        }
        Ok(DualFibrationMap { source, target, base, fibre })
    }

    /// `(F, ⟨π₀, R[F]⟩)` between cotangent bundles, whose composition is the
    /// reverse chain rule.
    pub fn reverse_derivative(f: &SmoothMap) -> Self {
        let (n, m) = (f.dom(), f.cod());
        let src = CoordBundle::tangent_bundle(n).star();
        let tgt = CoordBundle::tangent_bundle(m).star();
        let fibre = SmoothMap::pairing(&[&SmoothMap::block(n + m, 0, n), &r_combinator(f)]).unwrap();
        DualFibrationMap { source: src, target: tgt, base: f.clone(), fibre }
    }

    /// `(1_A, π₁)`.
    pub fn identity(e: &CoordBundle) -> Self {
        DualFibrationMap { source: e.clone(), target: e.clone(), base: SmoothMap::identity(e.base_dim()), fibre: e.place_map() }
    }

    pub fn source(&self) -> &CoordBundle {
        &self.source
    }

    pub fn target(&self) -> &CoordBundle {
        &self.target
    }

    pub fn base(&self) -> &SmoothMap {
        &self.base
    }

    pub fn fibre(&self) -> &SmoothMap {
        &self.fibre
    }

    /// `A ×_{A'} E'` for this map's base.
    pub fn pullback(&self) -> CoordBundle {
        self.target.pullback(&self.base).expect("base map was type-checked").0
    }

    /// The fibre map as an `A`-linear morphism from the pullback bundle.
    pub fn as_linear_morphism(&self) -> LinearBundleMorphism {
        LinearBundleMorphism::new(self.pullback(), self.source.clone(), SmoothMap::identity(self.source.base_dim()), self.fibre.clone())
            .expect("dual fibration map was type-checked")
    }

    /// `g q = π₀` and the lift square.
    pub fn verify(&self, cmp: &Compare) -> Vec<(String, Agreement)> {
        self.as_linear_morphism().verify(cmp).into_iter().map(|(name, a)| (name.replace("morphism", "dual_map"), a)).collect()
    }

    /// `(fh, ⟨1, (f × 1)k⟩ g)`, first `self` then `next`.
    pub fn then(&self, next: &DualFibrationMap) -> Result<DualFibrationMap> {
        if self.target != next.source {
            return Err(Error::BaseMismatch(format!("{} is not {}", self.target, next.source)));
        }
        let a = self.source.base_dim();
        let k2 = next.target.fibre_dim();
        // (a, u'') ↦ (f(a), u'') ↦ k(f(a), u'') ∈ E'
        let mut fa: Vec<Expr> = self.base.widen(a + k2).components().to_vec();
        fa.extend(vars(a..a + k2));
        let k_at = map(a + k2, fa).then(&next.fibre)?;
        let mut pulled = vars(0..a);
        pulled.extend(self.target.fibre_of(k_at.components()));
        let fibre = map(a + k2, pulled).then(&self.fibre)?;
        DualFibrationMap::new(self.source.clone(), next.target.clone(), self.base.then(&next.base)?, fibre)
    }

    /// Fibre matrix `N(a)` with `g(a, u') = (a, N(a) u')`.
    pub fn fibre_matrix(&self) -> Vec<Vec<Expr>> {
        fibre_jacobian(&self.fibre, &self.pullback(), self.source.fibre_idx())
    }

    /// `(f, g)* = (f, g*)` as a linear bundle morphism `E* → E'*`.
    pub fn star(&self) -> LinearBundleMorphism {
        let n = self.fibre_matrix();
        let d = dual_matrix(&n, self.target.pairing(), self.source.pairing());
        let src = self.source.star();
        let tgt = self.target.star();
        let a = src.base_dim();
        let k = src.fibre_dim();
        let split = src.split_map();
        let fibre = mat_vec(&d, &vars(a..a + k));
        let fa = self.base.widen(a + k);
        let total = split.then(&map(a + k, tgt.place(fa.components(), &fibre))).unwrap();
        LinearBundleMorphism::new(src, tgt, self.base.clone(), total).unwrap()
    }

    /// For a Cartesian map: the inverse of `g` and the forward Cartesian
    /// morphism `(f, g⁻¹π₁): E → E'`.
    pub fn cartesian_inverse(&self) -> Result<(SmoothMap, LinearBundleMorphism)> {
        let n = self.fibre_matrix();
        if n.len() != n.first().map_or(0, Vec::len) {
            return Err(Error::invariant("cartesian", "fibre map is not square"));
        }
        let inv = inverse_matrix(&n).ok_or_else(|| Error::invariant("cartesian", "fibre map is singular"))?;
        let pb = self.pullback();
        let (a, k) = (self.source.base_dim(), self.source.fibre_dim());
        let split = self.source.split_map();
        let g_inv = split.then(&map(a + k, pb.place(&vars(0..a), &mat_vec(&inv, &vars(a..a + k)))))?;
        let (_, cart) = self.target.pullback(&self.base)?;
        let forward = LinearBundleMorphism::new(self.source.clone(), self.target.clone(), self.base.clone(), g_inv.then(cart.total())?)?;
        Ok((g_inv, forward))
    }

    /// Equality of both components.
    pub fn compare(&self, other: &DualFibrationMap, cmp: &Compare) -> Agreement {
        Agreement::all([cmp.maps(&self.base, &other.base), cmp.maps(&self.fibre, &other.fibre)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmp() -> Compare {
        Compare::new(5, 50, 1e-9)
    }

    fn reverse_map(f: &SmoothMap) -> DualFibrationMap {
        DualFibrationMap::reverse_derivative(f)
    }

    #[test]
    fn composition_is_the_reverse_chain_rule() {
        let f = SmoothMap::parse("(map 2 2 (* x0 x1) (sin x0))").unwrap();
        let g = SmoothMap::parse("(map 2 1 (+ (* x0 x0) x1))").unwrap();
        let composed = reverse_map(&f).then(&reverse_map(&g)).unwrap();
        let direct = reverse_map(&f.then(&g).unwrap());
        assert!(composed.compare(&direct, &cmp()).holds);
    }

    #[test]
    fn identity_is_a_unit() {
        let f = SmoothMap::parse("(map 1 2 (exp x0) (* x0 x0 x0))").unwrap();
        let m = reverse_map(&f);
        let left = DualFibrationMap::identity(m.source()).then(&m).unwrap();
        let right = m.then(&DualFibrationMap::identity(m.target())).unwrap();
        assert!(left.compare(&m, &cmp()).holds);
        assert!(right.compare(&m, &cmp()).holds);
        assert!(m.verify(&cmp()).iter().all(|(_, a)| a.holds));
    }

    #[test]
    fn star_of_star_is_identity_up_to_normal_form() {
        let f = SmoothMap::parse("(map 2 1 (* x0 (cos x1)))").unwrap();
        let m = reverse_map(&f);
        let back = m.star().star();
        assert!(back.compare(&m, &cmp()).holds);
    }
}
