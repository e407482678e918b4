//! Smooth maps `ℝⁿ → ℝᵐ` as tuples of expressions, composed diagrammatically:
//! `f.then(&g)` is "first `f`, then `g`".

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::parse;
use crate::scalar::{Rational, Scalar};
use crate::tape::Tape;
use crate::QPoly;

#[derive(Clone)]
pub struct SmoothMap {
    dom: usize,
    components: Vec<Expr>,
    tape: Arc<OnceLock<Tape>>,
}

impl PartialEq for SmoothMap {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.components == other.components
    }
}

impl SmoothMap {
    /// Checks that every variable index is below `dom`.
    pub fn new(dom: usize, components: Vec<Expr>) -> Result<Self> {
        for c in &components {
            let arity = c.arity();
            if arity > dom {
                return Err(Error::UnboundVariable { index: arity - 1, dim: dom });
            }
        }
        Ok(Self::from_parts(dom, components))
    }

    fn from_parts(dom: usize, components: Vec<Expr>) -> Self {
        SmoothMap { dom, components, tape: Arc::new(OnceLock::new()) }
    }

    pub fn parse(source: &str) -> Result<Self> {
        parse::parse_map(source)
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts(n, (0..n).map(Expr::var).collect())
    }

    /// `x ↦ (x[indices[0]], x[indices[1]], ...)`.
    pub fn select(dom: usize, indices: &[usize]) -> Self {
        assert!(indices.iter().all(|&i| i < dom), "selection index out of range");
        Self::from_parts(dom, indices.iter().map(|&i| Expr::var(i)).collect())
    }

    /// Projection onto the block `[start, start + len)`.
    pub fn block(dom: usize, start: usize, len: usize) -> Self {
        let idx: Vec<usize> = (start..start + len).collect();
        Self::select(dom, &idx)
    }

    pub fn zero(dom: usize, cod: usize) -> Self {
        Self::from_parts(dom, vec![Expr::zero(); cod])
    }

    pub fn constant(dom: usize, values: &[Rational]) -> Self {
        Self::from_parts(dom, values.iter().cloned().map(Expr::constant).collect())
    }

    /// `⟨f, g, ...⟩`: same domain, outputs concatenated.
    pub fn pairing(maps: &[&SmoothMap]) -> Result<Self> {
        let dom = maps.first().map_or(0, |m| m.dom);
        let mut comps = Vec::new();
        for m in maps {
            if m.dom != dom {
                return Err(Error::dim("pairing", dom, m.dom));
            }
            comps.extend(m.components.iter().cloned());
        }
        Ok(Self::from_parts(dom, comps))
    }

    /// `f × g`: acts blockwise on concatenated inputs.
    pub fn product(maps: &[&SmoothMap]) -> Self {
        let mut offset = 0;
        let mut comps = Vec::new();
        for m in maps {
            comps.extend(m.components.iter().map(|c| c.shift_vars(offset)));
            offset += m.dom;
        }
        Self::from_parts(offset, comps)
    }

    /// Diagrammatic composite: first `self`, then `g`.
    pub fn then(&self, g: &SmoothMap) -> Result<Self> {
        if self.cod() != g.dom {
            return Err(Error::dim("composition", g.dom, self.cod()));
        }
        let mut memo = HashMap::new();
        let comps = g.components.iter().map(|c| c.substitute_with(&self.components, &mut memo)).collect();
        Ok(Self::from_parts(self.dom, comps))
    }

    /// Re-read the same formulas over a larger domain (extra inputs ignored).
    pub fn widen(&self, dom: usize) -> Self {
        assert!(dom >= self.dom);
        Self::from_parts(dom, self.components.clone())
    }

    /// Pointwise sum of two maps of the same type.
    pub fn add(&self, other: &SmoothMap) -> Result<Self> {
        if self.dom != other.dom || self.cod() != other.cod() {
            return Err(Error::dim("pointwise sum", self.cod(), other.cod()));
        }
        let comps = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect();
        Ok(Self::from_parts(self.dom, comps))
    }

    fn tape(&self) -> &Tape {
        self.tape.get_or_init(|| Tape::compile(&self.components))
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.dom {
            return Err(Error::dim("evaluation point", self.dom, x.len()));
        }
        self.tape().eval(x)
    }

    /// Exact evaluation at a rational point; fails on transcendental nodes
    /// away from zero.
    pub fn eval_exact(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.eval(x)
    }

    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.dom {
            return Err(Error::IndexOutOfRange { index: i, bound: self.dom });
        }
        let mut memo = HashMap::new();
        Ok(Self::from_parts(self.dom, self.components.iter().map(|c| c.partial_with(i, &mut memo)).collect()))
    }

    /// Symbolic Jacobian, `jac[j][i] = ∂f_j/∂x_i`.
    pub fn jacobian(&self) -> Vec<Vec<Expr>> {
        let cols: Vec<Vec<Expr>> = (0..self.dom)
            .map(|i| {
                let mut memo = HashMap::new();
                self.components.iter().map(|c| c.partial_with(i, &mut memo)).collect()
            })
            .collect();
        (0..self.cod()).map(|j| (0..self.dom).map(|i| cols[i][j].clone()).collect()).collect()
    }

    pub fn normalize(&self) -> Self {
        let mut memo = HashMap::new();
        Self::from_parts(self.dom, self.components.iter().map(|c| c.normalize_with(&mut memo)).collect())
    }

    /// Equality of normal forms.
    pub fn structurally_equal(&self, other: &SmoothMap) -> bool {
        self.dom == other.dom && self.cod() == other.cod() && self.normalize() == other.normalize()
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(Expr::is_polynomial)
    }

    pub fn to_polys(&self) -> Option<Vec<QPoly>> {
        self.components.iter().map(|c| c.to_poly(self.dom)).collect()
    }

    pub fn node_count(&self) -> usize {
        self.tape().len()
    }

    /// The map-format text of this map.
    pub fn to_source(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(map {} {}", self.dom, self.cod())?;
        for c in &self.components {
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn m(src: &str) -> SmoothMap {
        SmoothMap::parse(src).unwrap()
    }

    #[test]
    fn evaluates_pairs() {
        let f = m("(map 2 2 (* x0 x1) (+ x0 x1))");
        assert_eq!(f.eval(&[2.0, 3.0]).unwrap(), vec![6.0, 5.0]);
        let id = SmoothMap::identity(2);
        assert_eq!(id.eval(&[rat(1, 3), int(5)]).unwrap(), vec![rat(1, 3), int(5)]);
        assert_eq!(m("(map 1 1 (sin x0))").eval(&[0.0]).unwrap(), vec![0.0]);
        assert!(f.eval(&[1.0]).is_err());
    }

    #[test]
    fn composition_substitutes() {
        let f = m("(map 1 1 (* x0 x0))");
        let g = m("(map 1 1 (sin x0))");
        let fg = f.then(&g).unwrap();
        assert!(fg.structurally_equal(&m("(map 1 1 (sin (* x0 x0)))")));
        assert!(SmoothMap::identity(1).then(&g).unwrap().structurally_equal(&g));
        assert!(g.then(&f.widen(2)).is_err());
    }

    #[test]
    fn partials_of_documented_examples() {
        assert!(m("(map 2 1 (* x0 x1))").partial(0).unwrap().structurally_equal(&m("(map 2 1 x1)")));
        assert!(m("(map 1 1 (sin x0))").partial(0).unwrap().structurally_equal(&m("(map 1 1 (cos x0))")));
        assert!(m("(map 2 1 x0)").partial(1).unwrap().structurally_equal(&SmoothMap::zero(2, 1)));
        assert!(matches!(m("(map 2 1 x0)").partial(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn pretty_printer_round_trips() {
        let f = m("(map 3 2 (+ (* 2 x0 (sin x1)) -1/2) (neg (exp (+ x2 x0))))");
        assert_eq!(SmoothMap::parse(&f.to_source()).unwrap(), f);
    }

    #[test]
    fn products_shift_blocks() {
        let f = m("(map 1 1 (* x0 x0))");
        let g = m("(map 2 1 (+ x0 x1))");
        let fg = SmoothMap::product(&[&f, &g]);
        assert_eq!(fg.eval(&[3.0, 1.0, 2.0]).unwrap(), vec![9.0, 3.0]);
    }
}
