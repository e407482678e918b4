//! The differential combinator `D`, the tangent functor `T`, and the
//! tangent structure maps on Euclidean spaces.
//!
//! Coordinates: `T(ℝⁿ) = ℝⁿ × ℝⁿ` as `(x, v)`, the pullback `T₂` as
//! `(x, v, w)`, and `T²` as `(x, v, w, u)` where `T(T(F))` acts on
//! `((x, v), (w, u))`.

use crate::expr::Expr;
use crate::smooth::SmoothMap;

/// `D[F](x, y)_j = Σᵢ ∂f_j/∂x_i(x) · y_i`, a map `2n → m`.
pub fn d_combinator(f: &SmoothMap) -> SmoothMap {
    let n = f.dom();
    let jac = f.jacobian();
    let comps = jac.iter().map(|row| Expr::sum(row.iter().enumerate().map(|(i, d)| d.mul(&Expr::var(n + i))))).collect();
    SmoothMap::new(2 * n, comps).expect("derivative stays in scope")
}

/// `T(F) = ⟨π₀F, D[F]⟩`, a map `2n → 2m`.
pub fn tangent_map(f: &SmoothMap) -> SmoothMap {
    let base = f.widen(2 * f.dom());
    SmoothMap::pairing(&[&base, &d_combinator(f)]).expect("same domain")
}

/// `T²(F) = T(T(F))`, a map `4n → 4m`.
pub fn tangent2_map(f: &SmoothMap) -> SmoothMap {
    tangent_map(&tangent_map(f))
}

/// `T₂(F)(x, v, w) = (F(x), D[F](x, v), D[F](x, w))`, a map `3n → 3m`.
pub fn tangent_pullback_map(f: &SmoothMap) -> SmoothMap {
    let n = f.dom();
    let df = d_combinator(f);
    let along = |block: usize| {
        let pick = SmoothMap::pairing(&[&SmoothMap::block(3 * n, 0, n), &SmoothMap::block(3 * n, block * n, n)]).unwrap();
        pick.then(&df).unwrap()
    };
    SmoothMap::pairing(&[&f.widen(3 * n), &along(1), &along(2)]).unwrap()
}

/// The five structure transformations at `ℝⁿ`.
#[derive(Clone, Debug)]
pub struct TangentStructureMaps {
    pub n: usize,
    /// `p(x, v) = x`
    pub p: SmoothMap,
    /// `s(x, v, w) = (x, v + w)`
    pub s: SmoothMap,
    /// `z(x) = (x, 0)`
    pub z: SmoothMap,
    /// `ℓ(x, v) = (x, 0, 0, v)`
    pub l: SmoothMap,
    /// `c(x, v, w, u) = (x, w, v, u)`
    pub c: SmoothMap,
}

impl TangentStructureMaps {
    pub fn new(n: usize) -> Self {
        let x = |dom: usize| -> Vec<Expr> { (0..n).map(Expr::var).collect::<Vec<_>>().into_iter().take(dom).collect() };
        let zeros = || vec![Expr::zero(); n];
        let block = |k: usize| -> Vec<Expr> { (k * n..(k + 1) * n).map(Expr::var).collect() };

        let p = SmoothMap::block(2 * n, 0, n);
        let s = {
            let mut c = x(n);
            c.extend((0..n).map(|i| Expr::var(n + i).add(&Expr::var(2 * n + i))));
            SmoothMap::new(3 * n, c).unwrap()
        };
        let z = SmoothMap::new(n, [x(n), zeros()].concat()).unwrap();
        let l = SmoothMap::new(2 * n, [x(n), zeros(), zeros(), block(1)].concat()).unwrap();
        let c = SmoothMap::new(4 * n, [block(0), block(2), block(1), block(3)].concat()).unwrap();
        TangentStructureMaps { n, p, s, z, l, c }
    }
}
