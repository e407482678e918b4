//! The reverse combinator `R`, maps linear in their second argument, and the
//! linear dagger (fibrewise transpose) that reconstructs `R` from `D`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::sample::{Agreement, Compare};
use crate::smooth::SmoothMap;
use crate::tangent::d_combinator;

/// `R[F](x, z)_i = Σ_j ∂f_j/∂x_i(x) · z_j`, a map `n + m → n`.
pub fn r_combinator(f: &SmoothMap) -> SmoothMap {
    let n = f.dom();
    let jac = f.jacobian();
    let comps = (0..n).map(|i| Expr::sum(jac.iter().enumerate().map(|(j, row)| row[i].mul(&Expr::var(n + j))))).collect();
    SmoothMap::new(n + f.cod(), comps).expect("reverse derivative stays in scope")
}

/// `T*(F) = ⟨π₀, R[F]⟩`, a map `n + m → 2n`.
pub fn reverse_tangent_map(f: &SmoothMap) -> SmoothMap {
    let n = f.dom();
    let x = SmoothMap::block(n + f.cod(), 0, n);
    SmoothMap::pairing(&[&x, &r_combinator(f)]).unwrap()
}

#[derive(Clone, Debug)]
pub struct LinearityCheck {
    pub holds: bool,
    pub witness: Option<Vec<f64>>,
    pub agreement: Agreement,
}

/// Tests `⟨π₀, 0, 0, π₁⟩ D[g] = g` for `g: ℝᶜ × ℝᵃ → ℝᵇ`.
pub fn is_linear_in_second(g: &SmoothMap, context_dim: usize, cmp: &Compare) -> LinearityCheck {
    let (c, a) = (context_dim, g.dom() - context_dim);
    let dom = c + a;
    // (x, y) ↦ ((x, 0), (0, y))
    let mut comps: Vec<Expr> = (0..c).map(Expr::var).collect();
    comps.extend(std::iter::repeat_n(Expr::zero(), a + c));
    comps.extend((c..dom).map(Expr::var));
    let lift = SmoothMap::new(dom, comps).unwrap();
    let lhs = lift.then(&d_combinator(g)).unwrap();
    let agreement = cmp.maps(&lhs, g);
    LinearityCheck { holds: agreement.holds, witness: agreement.witness.clone(), agreement }
}

/// A map `ℝᶜ × ℝᵃ → ℝᵇ` known to be linear in its last `a` inputs.
#[derive(Clone, Debug)]
pub struct LinearInSecond {
    carrier: SmoothMap,
    context_dim: usize,
}

impl LinearInSecond {
    pub fn new(carrier: SmoothMap, context_dim: usize, cmp: &Compare) -> Result<Self> {
        if context_dim > carrier.dom() {
            return Err(Error::IndexOutOfRange { index: context_dim, bound: carrier.dom() });
        }
        let check = is_linear_in_second(&carrier, context_dim, cmp);
        if !check.holds {
            return Err(Error::NotLinear { witness: check.witness.unwrap_or_default() });
        }
        Ok(LinearInSecond { carrier, context_dim })
    }

    /// For maps linear by construction (derivatives, transposes).
    pub fn assume(carrier: SmoothMap, context_dim: usize) -> Self {
        assert!(context_dim <= carrier.dom());
        LinearInSecond { carrier, context_dim }
    }

    pub fn carrier(&self) -> &SmoothMap {
        &self.carrier
    }

    pub fn context_dim(&self) -> usize {
        self.context_dim
    }

    pub fn linear_dim(&self) -> usize {
        self.carrier.dom() - self.context_dim
    }

    pub fn cod_dim(&self) -> usize {
        self.carrier.cod()
    }

    /// `M(x)` with `g(x, a) = M(x)·a`: the Jacobian in the linear block at
    /// `a = 0`, a `b × a` matrix of expressions in the context variables.
    pub fn fibre_matrix(&self) -> Vec<Vec<Expr>> {
        let c = self.context_dim;
        let mut images: Vec<Expr> = (0..c).map(Expr::var).collect();
        images.extend(std::iter::repeat_n(Expr::zero(), self.linear_dim()));
        let mut memo = HashMap::new();
        let jac = self.carrier.jacobian();
        jac.iter().map(|row| row[c..].iter().map(|d| d.substitute_with(&images, &mut memo)).collect()).collect()
    }

    /// Fibrewise composite `(x, a) ↦ h(x, self(x, a))`.
    pub fn then(&self, h: &LinearInSecond) -> Result<LinearInSecond> {
        if h.context_dim != self.context_dim || h.linear_dim() != self.cod_dim() {
            return Err(Error::dim("fibrewise composition", h.linear_dim(), self.cod_dim()));
        }
        let x = SmoothMap::block(self.carrier.dom(), 0, self.context_dim);
        let inner = SmoothMap::pairing(&[&x, &self.carrier])?;
        Ok(LinearInSecond::assume(inner.then(&h.carrier)?, self.context_dim))
    }
}

/// `g†(x, w) = M(x)ᵀ w`, a map `ℝᶜ × ℝᵇ → ℝᵃ`.
pub fn linear_dagger(g: &LinearInSecond) -> LinearInSecond {
    let c = g.context_dim;
    let m = g.fibre_matrix();
    let comps = (0..g.linear_dim()).map(|i| Expr::sum(m.iter().enumerate().map(|(j, row)| row[i].mul(&Expr::var(c + j))))).collect();
    LinearInSecond::assume(SmoothMap::new(c + g.cod_dim(), comps).unwrap(), c)
}

/// `R[F]` rebuilt as the dagger of `D[F]` in its linear argument.
pub fn crdc_from_involution(f: &SmoothMap) -> SmoothMap {
    let df = LinearInSecond::assume(d_combinator(f), f.dom());
    linear_dagger(&df).carrier
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(src: &str) -> SmoothMap {
        SmoothMap::parse(src).unwrap()
    }

    fn cmp() -> Compare {
        Compare::new(3, 100, 1e-9)
    }

    #[test]
    fn reverse_derivative_at_point() {
        let f = m("(map 2 2 (* x0 x1) (+ x0 x1))");
        let r = r_combinator(&f).eval(&[int(2), int(3), int(1), int(1)]).unwrap();
        assert_eq!(r, vec![int(4), int(3)]);
        let t = reverse_tangent_map(&f).eval(&[int(2), int(3), int(1), int(1)]).unwrap();
        assert_eq!(t, vec![int(2), int(3), int(4), int(3)]);
    }

    #[test]
    fn reverse_of_identity_and_constant() {
        assert!(r_combinator(&SmoothMap::identity(2)).structurally_equal(&SmoothMap::block(4, 2, 2)));
        assert!(r_combinator(&SmoothMap::constant(2, &[int(1)])).structurally_equal(&SmoothMap::zero(3, 2)));
    }

    #[test]
    fn linearity_predicate() {
        assert!(is_linear_in_second(&m("(map 2 1 (* x0 x1))"), 1, &cmp()).holds);
        let sq = is_linear_in_second(&m("(map 2 1 (* x1 x1))"), 1, &cmp());
        assert!(!sq.holds && sq.witness.is_some());
        assert!(is_linear_in_second(&m("(map 2 1 (* (sin x0) x1))"), 1, &cmp()).holds);
    }

    #[test]
    fn dagger_transposes() {
        let g = LinearInSecond::new(m("(map 3 1 (+ (* x0 x1) x2))"), 1, &cmp()).unwrap();
        let d = linear_dagger(&g);
        assert!(d.carrier().structurally_equal(&m("(map 2 2 (* x0 x1) x1)")));
        let dd = linear_dagger(&d);
        assert_eq!(dd.carrier().to_polys(), g.carrier().to_polys());
        assert!(LinearInSecond::new(m("(map 2 1 (* x1 x1))"), 1, &cmp()).is_err());
    }

    #[test]
    fn crdc_agrees_with_reverse_combinator() {
        let f = m("(map 1 1 (exp x0))");
        assert!(crdc_from_involution(&f).structurally_equal(&r_combinator(&f)));
        let g = m("(map 2 2 (* x0 x0) (* x0 x1))");
        assert_eq!(crdc_from_involution(&g).to_polys(), r_combinator(&g).to_polys());
    }
}
