//! Differential bundles whose total space is a Euclidean space split into
//! base and fibre coordinates: trivial bundles `A × X`, tangent bundles,
//! tangents of bundles and pullbacks along smooth maps.
//!
//! `E_n` (the n-fold fibre product over the base) always uses the coordinates
//! `(b, u₁, …, uₙ)`. The total space may interleave base and fibre
//! coordinates; `base_idx`/`fibre_idx` say where they sit.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::linalg::Matrix;
use crate::sample::{Agreement, Compare};
use crate::scalar::Rational;
use crate::smooth::SmoothMap;
use crate::tangent::{tangent_map, TangentStructureMaps};
use crate::QMatrix;

pub(crate) fn vars(range: std::ops::Range<usize>) -> Vec<Expr> {
    range.map(Expr::var).collect()
}

pub(crate) fn zeros(n: usize) -> Vec<Expr> {
    vec![Expr::zero(); n]
}

pub(crate) fn map(dom: usize, comps: Vec<Expr>) -> SmoothMap {
    SmoothMap::new(dom, comps).expect("coordinate formula stays in scope")
}

/// Equality compares structure only. Names are descriptive, and `E*` carries
/// the same data as `E` (the double-dual identification is the identity).
#[derive(Clone, Debug)]
pub struct CoordBundle {
    name: String,
    base_dim: usize,
    fibre_dim: usize,
    base_idx: Vec<usize>,
    fibre_idx: Vec<usize>,
    q: SmoothMap,
    sigma: SmoothMap,
    zeta: SmoothMap,
    lambda: SmoothMap,
    /// Gram matrix of the fibre pairing with the dual bundle.
    pairing: QMatrix,
    dual: bool,
}

impl PartialEq for CoordBundle {
    fn eq(&self, other: &Self) -> bool {
        self.base_idx == other.base_idx
            && self.fibre_idx == other.fibre_idx
            && self.pairing == other.pairing
            && self.q == other.q
            && self.sigma == other.sigma
            && self.zeta == other.zeta
            && self.lambda == other.lambda
    }
}

impl CoordBundle {
    /// `π₀: A × X → A` with `σ = 1 × (π₀ + π₁)`, `ζ = ⟨1, 0⟩`,
    /// `λ = ⟨π₀, 0, 0, π₁⟩`.
    pub fn trivial(a: usize, x: usize) -> Self {
        let t = a + x;
        let q = SmoothMap::block(t, 0, a);
        let mut s = vars(0..a);
        s.extend((0..x).map(|i| Expr::var(a + i).add(&Expr::var(a + x + i))));
        let mut z = vars(0..a);
        z.extend(zeros(x));
        let mut l = vars(0..a);
        l.extend(zeros(x + a));
        l.extend(vars(a..t));
        CoordBundle {
            name: format!("R^{a} x R^{x}"),
            base_dim: a,
            fibre_dim: x,
            base_idx: (0..a).collect(),
            fibre_idx: (a..t).collect(),
            q,
            sigma: map(a + 2 * x, s),
            zeta: map(a, z),
            lambda: map(t, l),
            pairing: Matrix::identity(x),
            dual: false,
        }
    }

    /// `𝒯(ℝⁿ) = (p, s, z, ℓ)`.
    pub fn tangent_bundle(n: usize) -> Self {
        let mut b = Self::trivial(n, n);
        b.name = format!("T(R^{n})");
        b
    }

    pub fn name(&self) -> String {
        if self.dual {
            format!("{}*", self.name)
        } else {
            self.name.clone()
        }
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fibre_dim(&self) -> usize {
        self.fibre_dim
    }

    pub fn total_dim(&self) -> usize {
        self.base_dim + self.fibre_dim
    }

    pub fn base_idx(&self) -> &[usize] {
        &self.base_idx
    }

    pub fn fibre_idx(&self) -> &[usize] {
        &self.fibre_idx
    }

    pub fn q(&self) -> &SmoothMap {
        &self.q
    }

    pub fn sigma(&self) -> &SmoothMap {
        &self.sigma
    }

    pub fn zeta(&self) -> &SmoothMap {
        &self.zeta
    }

    pub fn lambda(&self) -> &SmoothMap {
        &self.lambda
    }

    pub fn pairing(&self) -> &QMatrix {
        &self.pairing
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    /// Total coordinates from base and fibre expressions.
    pub fn place(&self, base: &[Expr], fibre: &[Expr]) -> Vec<Expr> {
        let mut out = vec![Expr::zero(); self.total_dim()];
        for (k, &i) in self.base_idx.iter().enumerate() {
            out[i] = base[k].clone();
        }
        for (k, &i) in self.fibre_idx.iter().enumerate() {
            out[i] = fibre[k].clone();
        }
        out
    }

    pub fn base_of(&self, total: &[Expr]) -> Vec<Expr> {
        self.base_idx.iter().map(|&i| total[i].clone()).collect()
    }

    pub fn fibre_of(&self, total: &[Expr]) -> Vec<Expr> {
        self.fibre_idx.iter().map(|&i| total[i].clone()).collect()
    }

    /// `(b, u) ↦ e`.
    pub fn place_map(&self) -> SmoothMap {
        let a = self.base_dim;
        map(self.total_dim(), self.place(&vars(0..a), &vars(a..self.total_dim())))
    }

    /// `e ↦ (b, u)`, inverse of [`place_map`](Self::place_map).
    pub fn split_map(&self) -> SmoothMap {
        let idx: Vec<usize> = self.base_idx.iter().chain(&self.fibre_idx).copied().collect();
        SmoothMap::select(self.total_dim(), &idx)
    }

    /// Projection `E_n → E` onto the `i`-th summand.
    pub fn proj(&self, n: usize, i: usize) -> SmoothMap {
        let (a, k) = (self.base_dim, self.fibre_dim);
        map(a + n * k, self.place(&vars(0..a), &vars(a + i * k..a + (i + 1) * k)))
    }

    /// `⟨e₁, …, eₙ⟩: D → E_n` for maps into `E` over a common base point
    /// (the base is read from the first).
    pub fn tuple(&self, maps: &[&SmoothMap]) -> SmoothMap {
        let dom = maps[0].dom();
        let mut comps = self.base_of(maps[0].components());
        for m in maps {
            comps.extend(self.fibre_of(m.components()));
        }
        map(dom, comps)
    }

    /// The tangent bundle of this bundle: `(T(q), T(σ), T(ζ), T(λ)c)`.
    pub fn tangent(&self) -> CoordBundle {
        let (a, k, t) = (self.base_dim, self.fibre_dim, self.total_dim());
        // T(E)₂ = ((b, db), (u₁, du₁), (u₂, du₂)) → T(E₂) = (b, u₁, u₂, db, du₁, du₂)
        let (b, db) = (0..a, a..2 * a);
        let (u1, du1) = (2 * a..2 * a + k, 2 * a + k..2 * a + 2 * k);
        let (u2, du2) = (2 * a + 2 * k..2 * a + 3 * k, 2 * a + 3 * k..2 * (a + 2 * k));
        let order: Vec<usize> = [b, u1, u2, db, du1, du2].into_iter().flatten().collect();
        let reorder = SmoothMap::select(2 * (a + 2 * k), &order);
        let c = TangentStructureMaps::new(t).c;
        let mut pairing = Matrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                pairing[(i, k + j)] = self.pairing[(i, j)].clone();
                pairing[(k + i, j)] = self.pairing[(i, j)].clone();
            }
        }
        CoordBundle {
            name: format!("T({})", self.name()),
            base_dim: 2 * a,
            fibre_dim: 2 * k,
            base_idx: self.base_idx.iter().copied().chain(self.base_idx.iter().map(|i| t + i)).collect(),
            fibre_idx: self.fibre_idx.iter().copied().chain(self.fibre_idx.iter().map(|i| t + i)).collect(),
            q: tangent_map(&self.q),
            sigma: reorder.then(&tangent_map(&self.sigma)).unwrap(),
            zeta: tangent_map(&self.zeta),
            lambda: tangent_map(&self.lambda).then(&c).unwrap(),
            pairing,
            dual: self.dual,
        }
    }

    /// The pullback bundle `X ×_A E` along `f: X → A`, in coordinates
    /// `(x, u)`, with its Cartesian morphism `(f, π₁)`.
    pub fn pullback(&self, f: &SmoothMap) -> Result<(CoordBundle, LinearBundleMorphism)> {
        if f.cod() != self.base_dim {
            return Err(Error::BaseMismatch(format!("map lands in R^{} but the bundle's base is R^{}", f.cod(), self.base_dim)));
        }
        let (xd, k, t) = (f.dom(), self.fibre_dim, self.total_dim());
        let fx = f.components().to_vec();
        let x = vars(0..xd);
        // σ on (x, u₁, u₂) through (f(x), u₁, u₂)
        let mut e2 = fx.clone();
        e2.extend(vars(xd..xd + 2 * k));
        let summed = map(xd + 2 * k, e2).then(&self.sigma)?;
        let sigma = map(xd + 2 * k, [x.clone(), self.fibre_of(summed.components())].concat());
        let zeroed = f.then(&self.zeta)?;
        let zeta = map(xd, [x.clone(), self.fibre_of(zeroed.components())].concat());
        let e = map(xd + k, self.place(&fx, &vars(xd..xd + k)));
        let lifted = e.then(&self.lambda)?;
        // (0_x, λ(e)) read back in (x, u, dx, du)
        let at: Vec<Expr> = self.fibre_idx.iter().map(|&i| lifted.components()[i].clone()).collect();
        let dfibre: Vec<Expr> = self.fibre_idx.iter().map(|&i| lifted.components()[t + i].clone()).collect();
        let lambda = map(xd + k, [x.clone(), at, zeros(xd), dfibre].concat());
        let pb = CoordBundle {
            name: format!("pullback of {} along {}", self.name(), f),
            base_dim: xd,
            fibre_dim: k,
            base_idx: (0..xd).collect(),
            fibre_idx: (xd..xd + k).collect(),
            q: SmoothMap::block(xd + k, 0, xd),
            sigma,
            zeta,
            lambda,
            pairing: self.pairing.clone(),
            dual: self.dual,
        };
        let cart = LinearBundleMorphism::new(pb.clone(), self.clone(), f.clone(), e)?;
        Ok((pb, cart))
    }

    /// `E*`: same coordinates, dual pairing; applying it twice gives back
    /// exactly `E`.
    pub fn star(&self) -> CoordBundle {
        CoordBundle { dual: !self.dual, ..self.clone() }
    }

    /// Check every bundle equation; each entry is `(law, agreement)`.
    pub fn verify_axioms(&self, cmp: &Compare) -> Vec<(String, Agreement)> {
        let (a, k, t) = (self.base_dim, self.fibre_dim, self.total_dim());
        let id_e = SmoothMap::identity(t);
        let id_a = SmoothMap::identity(a);
        let then = |f: &SmoothMap, g: &SmoothMap| f.then(g).expect("bundle maps compose");
        let p1 = self.proj(2, 0);
        let p2 = self.proj(2, 1);
        let mut out = Vec::new();
        let mut law = |name: &str, lhs: SmoothMap, rhs: SmoothMap| {
            out.push((name.to_string(), cmp.maps(&lhs, &rhs)));
        };

        law("zero_is_section", then(&self.zeta, &self.q), id_a.clone());
        law("sum_over_base", then(&self.sigma, &self.q), then(&p1, &self.q));
        let unit = self.tuple(&[&id_e, &then(&self.q, &self.zeta)]);
        law("sum_unit", then(&unit, &self.sigma), id_e.clone());
        let swap = self.tuple(&[&p2, &p1]);
        law("sum_commutative", then(&swap, &self.sigma), self.sigma.clone());
        let (q1, q2, q3) = (self.proj(3, 0), self.proj(3, 1), self.proj(3, 2));
        let left = then(&self.tuple(&[&q1, &q2]), &self.sigma);
        let right = then(&self.tuple(&[&q2, &q3]), &self.sigma);
        law("sum_associative", then(&self.tuple(&[&left, &q3]), &self.sigma), then(&self.tuple(&[&q1, &right]), &self.sigma));

        let ts = TangentStructureMaps::new(t);
        let ta = TangentStructureMaps::new(a);
        law("lift_is_vertical", then(&self.lambda, &ts.p), then(&self.q, &self.zeta));
        law("lift_over_zero", then(&self.lambda, &tangent_map(&self.q)), then(&self.q, &ta.z));
        law("lift_preserves_zero", then(&self.zeta, &self.lambda), then(&self.zeta, &ts.z));
        // σλ = ⟨π₁λ, π₂λ⟩ s_E in T(E)'s own fibre
        let l1 = then(&p1, &self.lambda);
        let l2 = then(&p2, &self.lambda);
        let dom2 = a + 2 * k;
        let mut t2 = l1.components()[..t].to_vec();
        t2.extend(l1.components()[t..].iter().cloned());
        t2.extend(l2.components()[t..].iter().cloned());
        law("lift_additive", then(&self.sigma, &self.lambda), then(&map(dom2, t2), &ts.s));
        // σλ = (λ ×_T λ) T(σ) through T(E₂) = (b, u₁, u₂, db, du₁, du₂)
        let (c1, c2) = (l1.components(), l2.components());
        let mut te2 = self.base_of(&c1[..t]);
        te2.extend(self.fibre_of(&c1[..t]));
        te2.extend(self.fibre_of(&c2[..t]));
        te2.extend(self.base_of(&c1[t..]));
        te2.extend(self.fibre_of(&c1[t..]));
        te2.extend(self.fibre_of(&c2[t..]));
        law("lift_sum_tangent", then(&self.sigma, &self.lambda), then(&map(dom2, te2), &tangent_map(&self.sigma)));
        law("lift_lift", then(&self.lambda, &ts.l), then(&self.lambda, &tangent_map(&self.lambda)));

        let symmetric = self.pairing == self.pairing.transpose();
        let invertible = self.pairing.inverse().is_some();
        out.push(("pairing_nondegenerate".to_string(), Agreement::exact(crate::sample::Method::Exact, symmetric && invertible)));
        out
    }
}

impl fmt::Display for CoordBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// `k × k'`-matrix of expressions in `k'` base variables: the fibre part of
/// `g(place(b, u))` differentiated in `u` at `u = 0`.
pub(crate) fn fibre_jacobian(g: &SmoothMap, source: &CoordBundle, target_fibre_idx: &[usize]) -> Vec<Vec<Expr>> {
    let a = source.base_dim;
    let through = source.place_map().then(g).expect("fibre jacobian composes");
    let jac = through.jacobian();
    let mut at_zero = vars(0..a);
    at_zero.extend(zeros(source.fibre_dim));
    let mut memo = std::collections::HashMap::new();
    target_fibre_idx.iter().map(|&j| jac[j][a..].iter().map(|d| d.substitute_with(&at_zero, &mut memo)).collect()).collect()
}

/// `P⁻¹ Mᵀ P'` as expressions: the matrix of the dual of a fibre map `M`
/// between fibres with pairings `P` (source) and `P'` (target).
pub(crate) fn dual_matrix(m: &[Vec<Expr>], p_source: &QMatrix, p_target: &QMatrix) -> Vec<Vec<Expr>> {
    let rows = m.len();
    let cols = p_source.rows();
    let inv = p_source.inverse().expect("pairing is invertible");
    let c = |q: &Rational| Expr::constant(q.clone());
    // (Mᵀ P')[i][j] = Σ_r M[r][i] P'[r][j]
    let mtp: Vec<Vec<Expr>> = (0..cols)
        .map(|i| {
            (0..rows)
                .map(|j| Expr::sum((0..rows).filter(|&r| !p_target[(r, j)].is_zero()).map(|r| m[r][i].mul(&c(&p_target[(r, j)])))))
                .collect()
        })
        .collect();
    (0..cols)
        .map(|i| {
            (0..rows).map(|j| Expr::sum((0..cols).filter(|&r| !inv[(i, r)].is_zero()).map(|r| mtp[r][j].mul(&c(&inv[(i, r)]))))).collect()
        })
        .collect()
}

pub(crate) fn mat_vec(m: &[Vec<Expr>], v: &[Expr]) -> Vec<Expr> {
    m.iter().map(|row| Expr::sum(row.iter().zip(v).map(|(a, b)| a.mul(b)))).collect()
}

/// Inverse of a square matrix of expressions: exact when constant,
/// adjugate over determinant otherwise.
pub(crate) fn inverse_matrix(m: &[Vec<Expr>]) -> Option<Vec<Vec<Expr>>> {
    let n = m.len();
    if m.iter().flatten().all(|e| e.as_const().is_some()) {
        let q = Matrix::from_rows(&m.iter().map(|r| r.iter().map(|e| e.as_const().unwrap().clone()).collect()).collect::<Vec<_>>());
        let inv = q.inverse()?;
        return Some((0..n).map(|i| (0..n).map(|j| Expr::constant(inv[(i, j)].clone())).collect()).collect());
    }
    let det = determinant(m);
    if det.is_zero() {
        return None;
    }
    let inv_det = det.inv();
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let sign = if (i + j) % 2 == 0 { Expr::one() } else { Expr::integer(-1) };
                        Expr::product([sign, determinant(&minor(m, j, i)), inv_det.clone()])
                    })
                    .collect()
            })
            .collect(),
    )
}

fn minor(m: &[Vec<Expr>], row: usize, col: usize) -> Vec<Vec<Expr>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

pub(crate) fn determinant(m: &[Vec<Expr>]) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        n => Expr::sum((0..n).filter(|&j| !m[0][j].is_zero()).map(|j| {
            let term = m[0][j].mul(&determinant(&minor(m, 0, j)));
            if j % 2 == 0 {
                term
            } else {
                term.neg()
            }
        })),
    }
}

/// A linear differential bundle morphism `(f, g): E → E'`.
#[derive(Clone, Debug)]
pub struct LinearBundleMorphism {
    source: CoordBundle,
    target: CoordBundle,
    base: SmoothMap,
    total: SmoothMap,
}

impl LinearBundleMorphism {
    /// Type-checks only; [`verify`](Self::verify) checks the two squares.
    pub fn new(source: CoordBundle, target: CoordBundle, base: SmoothMap, total: SmoothMap) -> Result<Self> {
        if base.dom() != source.base_dim || base.cod() != target.base_dim {
            return Err(Error::BaseMismatch(format!(
                "base map {}→{} between bases R^{} and R^{}",
                base.dom(),
                base.cod(),
                source.base_dim,
                target.base_dim
            )));
        }
        if total.dom() != source.total_dim() || total.cod() != target.total_dim() {
            return Err(Error::dim("total map", target.total_dim(), total.cod()));
        }
        Ok(LinearBundleMorphism { source, target, base, total })
    }

    pub fn identity(e: &CoordBundle) -> Self {
        LinearBundleMorphism {
            source: e.clone(),
            target: e.clone(),
            base: SmoothMap::identity(e.base_dim),
            total: SmoothMap::identity(e.total_dim()),
        }
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

    pub fn total(&self) -> &SmoothMap {
        &self.total
    }

    /// `g q' = q f` and `λ T(g) = g λ'`.
    pub fn verify(&self, cmp: &Compare) -> Vec<(String, Agreement)> {
        let then = |f: &SmoothMap, g: &SmoothMap| f.then(g).expect("morphism maps compose");
        vec![
            ("morphism_over_base".to_string(), cmp.maps(&then(&self.total, &self.target.q), &then(&self.source.q, &self.base))),
            (
                "morphism_preserves_lift".to_string(),
                cmp.maps(&then(&self.source.lambda, &tangent_map(&self.total)), &then(&self.total, &self.target.lambda)),
            ),
        ]
    }

    pub fn then(&self, other: &LinearBundleMorphism) -> Result<LinearBundleMorphism> {
        if self.target != other.source {
            return Err(Error::BaseMismatch(format!("{} is not {}", self.target, other.source)));
        }
        LinearBundleMorphism::new(self.source.clone(), other.target.clone(), self.base.then(&other.base)?, self.total.then(&other.total)?)
    }

    /// `(T(f), T(g))` between the tangent bundles.
    pub fn tangent(&self) -> LinearBundleMorphism {
        LinearBundleMorphism {
            source: self.source.tangent(),
            target: self.target.tangent(),
            base: tangent_map(&self.base),
            total: tangent_map(&self.total),
        }
    }

    /// `M(b)` with `g(b, u) = (f(b), M(b) u)`.
    pub fn fibre_matrix(&self) -> Vec<Vec<Expr>> {
        fibre_jacobian(&self.total, &self.source, &self.target.fibre_idx)
    }

    /// `(f, g*)` in the dual fibration: `g*(a, ψ) = (a, P⁻¹ M(a)ᵀ P' ψ)`.
    pub fn star(&self) -> super::fibration::DualFibrationMap {
        let (a, k2) = (self.source.base_dim, self.target.fibre_dim);
        let m = self.fibre_matrix();
        let d = dual_matrix(&m, &self.source.pairing, &self.target.pairing);
        let fibre = mat_vec(&d, &vars(a..a + k2));
        let src = self.source.star();
        let g = map(a + k2, src.place(&vars(0..a), &fibre));
        super::fibration::DualFibrationMap::new(src, self.target.star(), self.base.clone(), g)
            .expect("dual of a well-typed morphism is well typed")
    }
}

/// `(u, k'): D → X ×_A E` with `k' π₁ = k`, for a morphism `(h, k): D → E`
/// whose base map factors as `h = u f`.
pub fn factor_through_pullback(m: &LinearBundleMorphism, u: &SmoothMap, pullback: &CoordBundle) -> Result<LinearBundleMorphism> {
    let d = m.source();
    let e_total = m.total().components();
    let base = m.source().q().then(u)?;
    let comps = pullback.place(base.components(), &m.target().fibre_of(e_total));
    LinearBundleMorphism::new(d.clone(), pullback.clone(), u.clone(), map(d.total_dim(), comps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn cmp() -> Compare {
        Compare::new(11, 50, 1e-9)
    }

    fn all_hold(laws: &[(String, Agreement)]) -> bool {
        laws.iter().all(|(name, a)| {
            if !a.holds {
                eprintln!("{name} failed: {a:?}");
            }
            a.holds
        })
    }

    #[test]
    fn trivial_and_tangent_bundles_satisfy_axioms() {
        assert!(all_hold(&CoordBundle::trivial(2, 3).verify_axioms(&cmp())));
        let t = CoordBundle::tangent_bundle(2);
        let s = TangentStructureMaps::new(2);
        assert_eq!((t.q(), t.sigma(), t.zeta(), t.lambda()), (&s.p, &s.s, &s.z, &s.l));
        assert!(all_hold(&t.verify_axioms(&cmp())));
    }

    #[test]
    fn tangent_of_bundle_is_a_bundle() {
        let e = CoordBundle::trivial(1, 2);
        let te = e.tangent();
        assert_eq!((te.base_dim(), te.fibre_dim()), (2, 4));
        assert!(all_hold(&te.verify_axioms(&cmp())));
        assert!(all_hold(&te.tangent().verify_axioms(&cmp())));
    }

    #[test]
    fn pullback_is_trivial_and_cartesian_map_is_linear() {
        let e = CoordBundle::trivial(2, 2);
        let f = SmoothMap::parse("(map 1 2 (sin x0) (* x0 x0))").unwrap();
        let (pb, cart) = e.pullback(&f).unwrap();
        assert_eq!((pb.base_dim(), pb.fibre_dim()), (1, 2));
        assert!(all_hold(&pb.verify_axioms(&cmp())));
        assert!(all_hold(&cart.verify(&cmp())));
    }

    #[test]
    fn symbolic_inverse_round_trips() {
        let x = Expr::var(0);
        let m = vec![vec![Expr::one().add(&x.mul(&x)), x.clone()], vec![Expr::zero(), Expr::integer(2)]];
        let inv = inverse_matrix(&m).unwrap();
        let at = |e: &Expr| e.eval(&[crate::scalar::rat(1, 3)]).unwrap();
        let prod: Vec<Vec<Rational>> =
            (0..2).map(|i| (0..2).map(|j| (0..2).map(|r| at(&m[i][r]) * at(&inv[r][j])).sum()).collect()).collect();
        assert_eq!(prod, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
    }
}
