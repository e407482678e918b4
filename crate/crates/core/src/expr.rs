//! Expression DAGs for smooth maps.
//!
//! Nodes are reference counted and shared, so substitution and
//! differentiation keep the DAG structure instead of copying subtrees. The
//! smart constructors ([`Expr::sum`], [`Expr::product`], ...) perform local
//! simplification: flattening, constant folding, and dropping neutral
//! elements. [`Expr::normalize`] additionally sorts the children of sums and
//! products, giving a form in which structural equality is meaningful.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::Poly;
use crate::scalar::{int, Rational, Scalar};
use crate::tape::Tape;
use crate::QPoly;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExprKind {
    Var(usize),
    Const(Rational),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Neg(Expr),
    Sin(Expr),
    Cos(Expr),
    Exp(Expr),
    /// Reciprocal; partial, undefined where the argument vanishes.
    Inv(Expr),
}

// equality is structural, so the derived hash agrees with it
#[allow(clippy::derived_hash_with_manual_eq)]
#[derive(Clone, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<ExprKind>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Expr {}

type NodeId = *const ExprKind;

impl Expr {
    fn new(kind: ExprKind) -> Self {
        Expr(Arc::new(kind))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0
    }

    pub(crate) fn id(&self) -> NodeId {
        Arc::as_ptr(&self.0)
    }

    pub fn var(i: usize) -> Self {
        Expr::new(ExprKind::Var(i))
    }

    pub fn constant(q: Rational) -> Self {
        Expr::new(ExprKind::Const(q))
    }

    pub fn integer(n: i64) -> Self {
        Expr::constant(int(n))
    }

    pub fn zero() -> Self {
        Expr::integer(0)
    }

    pub fn one() -> Self {
        Expr::integer(1)
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.kind() {
            ExprKind::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(One::is_one)
    }

    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Self {
        let mut constant = Rational::zero();
        let mut rest = Vec::new();
        for item in items {
            match item.kind() {
                ExprKind::Const(q) => constant += q,
                ExprKind::Sum(children) => {
                    for c in children {
                        match c.kind() {
                            ExprKind::Const(q) => constant += q,
                            _ => rest.push(c.clone()),
                        }
                    }
                }
                _ => rest.push(item),
            }
        }
        if !constant.is_zero() {
            rest.insert(0, Expr::constant(constant));
        }
        match rest.len() {
            0 => Expr::zero(),
            1 => rest.pop().unwrap(),
            _ => Expr::new(ExprKind::Sum(rest)),
        }
    }

    pub fn product(items: impl IntoIterator<Item = Expr>) -> Self {
        let mut constant = Rational::one();
        let mut rest = Vec::new();
        let push = |e: &Expr, constant: &mut Rational, rest: &mut Vec<Expr>| match e.kind() {
            ExprKind::Const(q) => *constant *= q,
            ExprKind::Neg(inner) => {
                *constant = -constant.clone();
                match inner.kind() {
                    ExprKind::Product(children) => {
                        for c in children {
                            match c.kind() {
                                ExprKind::Const(q) => *constant *= q,
                                _ => rest.push(c.clone()),
                            }
                        }
                    }
                    _ => rest.push(inner.clone()),
                }
            }
            _ => rest.push(e.clone()),
        };
        for item in items {
            match item.kind() {
                ExprKind::Product(children) => {
                    for c in children {
                        push(c, &mut constant, &mut rest);
                    }
                }
                _ => push(&item, &mut constant, &mut rest),
            }
        }
        if constant.is_zero() {
            return Expr::zero();
        }
        if rest.is_empty() {
            return Expr::constant(constant);
        }
        if rest.len() == 1 && (-constant.clone()).is_one() {
            return Expr::new(ExprKind::Neg(rest.pop().unwrap()));
        }
        if !constant.is_one() {
            rest.insert(0, Expr::constant(constant));
        }
        match rest.len() {
            1 => rest.pop().unwrap(),
            _ => Expr::new(ExprKind::Product(rest)),
        }
    }

    pub fn add(&self, rhs: &Expr) -> Self {
        Expr::sum([self.clone(), rhs.clone()])
    }

    pub fn mul(&self, rhs: &Expr) -> Self {
        Expr::product([self.clone(), rhs.clone()])
    }

    pub fn sub(&self, rhs: &Expr) -> Self {
        Expr::sum([self.clone(), rhs.neg()])
    }

    pub fn neg(&self) -> Self {
        match self.kind() {
            ExprKind::Const(q) => Expr::constant(-q),
            ExprKind::Neg(inner) => inner.clone(),
            ExprKind::Product(children) => Expr::product(std::iter::once(Expr::integer(-1)).chain(children.iter().cloned())),
            _ => Expr::new(ExprKind::Neg(self.clone())),
        }
    }

    pub fn sin(&self) -> Self {
        if self.is_zero() {
            return Expr::zero();
        }
        Expr::new(ExprKind::Sin(self.clone()))
    }

    pub fn cos(&self) -> Self {
        if self.is_zero() {
            return Expr::one();
        }
        Expr::new(ExprKind::Cos(self.clone()))
    }

    pub fn exp(&self) -> Self {
        if self.is_zero() {
            return Expr::one();
        }
        Expr::new(ExprKind::Exp(self.clone()))
    }

    pub fn inv(&self) -> Self {
        match self.as_const() {
            Some(q) if !q.is_zero() => Expr::constant(q.recip()),
            _ => Expr::new(ExprKind::Inv(self.clone())),
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        Expr::product(std::iter::repeat_n(self.clone(), n as usize))
    }

    /// Immediate children.
    pub fn children(&self) -> Vec<&Expr> {
        match self.kind() {
            ExprKind::Var(_) | ExprKind::Const(_) => vec![],
            ExprKind::Sum(c) | ExprKind::Product(c) => c.iter().collect(),
            ExprKind::Neg(e) | ExprKind::Sin(e) | ExprKind::Cos(e) | ExprKind::Exp(e) | ExprKind::Inv(e) => {
                vec![e]
            }
        }
    }

    /// Rebuild this node with new children through the smart constructors.
    fn rebuild(&self, children: Vec<Expr>) -> Expr {
        let mut it = children.into_iter();
        match self.kind() {
            ExprKind::Var(_) | ExprKind::Const(_) => self.clone(),
            ExprKind::Sum(_) => Expr::sum(it),
            ExprKind::Product(_) => Expr::product(it),
            ExprKind::Neg(_) => it.next().unwrap().neg(),
            ExprKind::Sin(_) => it.next().unwrap().sin(),
            ExprKind::Cos(_) => it.next().unwrap().cos(),
            ExprKind::Exp(_) => it.next().unwrap().exp(),
            ExprKind::Inv(_) => it.next().unwrap().inv(),
        }
    }

    /// Bottom-up rewrite with sharing: `leaf` handles variables, every other
    /// node is rebuilt from its rewritten children.
    fn rewrite(&self, memo: &mut HashMap<NodeId, Expr>, leaf: &dyn Fn(usize) -> Expr) -> Expr {
        if let Some(e) = memo.get(&self.id()) {
            return e.clone();
        }
        let out = match self.kind() {
            ExprKind::Var(i) => leaf(*i),
            ExprKind::Const(_) => self.clone(),
            _ => {
                let children = self.children().into_iter().map(|c| c.rewrite(memo, leaf)).collect();
                self.rebuild(children)
            }
        };
        memo.insert(self.id(), out.clone());
        out
    }

    /// Replace variable `i` by `images[i]`.
    pub fn substitute(&self, images: &[Expr]) -> Expr {
        let mut memo = HashMap::new();
        self.substitute_with(images, &mut memo)
    }

    pub(crate) fn substitute_with(&self, images: &[Expr], memo: &mut HashMap<NodeId, Expr>) -> Expr {
        self.rewrite(memo, &|i| images[i].clone())
    }

    /// Shift every variable index by `offset`.
    pub fn shift_vars(&self, offset: usize) -> Expr {
        let mut memo = HashMap::new();
        self.rewrite(&mut memo, &|i| Expr::var(i + offset))
    }

    /// Largest variable index plus one (0 for closed expressions).
    pub fn arity(&self) -> usize {
        fn go(e: &Expr, memo: &mut HashMap<NodeId, usize>) -> usize {
            if let Some(&n) = memo.get(&e.id()) {
                return n;
            }
            let n = match e.kind() {
                ExprKind::Var(i) => i + 1,
                _ => e.children().into_iter().map(|c| go(c, memo)).max().unwrap_or(0),
            };
            memo.insert(e.id(), n);
            n
        }
        go(self, &mut HashMap::new())
    }

    /// Exact symbolic partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> Expr {
        self.partial_with(i, &mut HashMap::new())
    }

    pub(crate) fn partial_with(&self, i: usize, memo: &mut HashMap<NodeId, Expr>) -> Expr {
        if let Some(e) = memo.get(&self.id()) {
            return e.clone();
        }
        let d = match self.kind() {
            ExprKind::Var(j) => {
                if *j == i {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            ExprKind::Const(_) => Expr::zero(),
            ExprKind::Sum(children) => Expr::sum(children.iter().map(|c| c.partial_with(i, memo))),
            ExprKind::Product(children) => {
                let mut terms = Vec::new();
                for (k, c) in children.iter().enumerate() {
                    let dc = c.partial_with(i, memo);
                    if dc.is_zero() {
                        continue;
                    }
                    let others = children.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, e)| e.clone());
                    terms.push(Expr::product(others.chain(std::iter::once(dc))));
                }
                Expr::sum(terms)
            }
            ExprKind::Neg(e) => e.partial_with(i, memo).neg(),
            ExprKind::Sin(e) => chain(e.cos(), e.partial_with(i, memo)),
            ExprKind::Cos(e) => chain(e.sin().neg(), e.partial_with(i, memo)),
            ExprKind::Exp(e) => chain(self.clone(), e.partial_with(i, memo)),
            ExprKind::Inv(e) => chain(Expr::product([Expr::integer(-1), self.clone(), self.clone()]), e.partial_with(i, memo)),
        };
        memo.insert(self.id(), d.clone());
        d
    }

    /// Canonical form: children of sums and products sorted, constants
    /// folded, neutral elements dropped.
    pub fn normalize(&self) -> Expr {
        self.normalize_with(&mut HashMap::new())
    }

    pub(crate) fn normalize_with(&self, memo: &mut HashMap<NodeId, Expr>) -> Expr {
        if let Some(e) = memo.get(&self.id()) {
            return e.clone();
        }
        let out = match self.kind() {
            ExprKind::Var(_) | ExprKind::Const(_) => self.clone(),
            ExprKind::Sum(children) => {
                let flat = Expr::sum(children.iter().map(|c| c.normalize_with(memo)));
                sort_children(flat)
            }
            ExprKind::Product(children) => {
                let flat = Expr::product(children.iter().map(|c| c.normalize_with(memo)));
                sort_children(flat)
            }
            _ => {
                let children = self.children().into_iter().map(|c| c.normalize_with(memo)).collect();
                sort_children(self.rebuild(children))
            }
        };
        memo.insert(self.id(), out.clone());
        out
    }

    /// Exact polynomial in `nvars` variables, if the expression is one.
    pub fn to_poly(&self, nvars: usize) -> Option<QPoly> {
        fn go(e: &Expr, nvars: usize, memo: &mut HashMap<NodeId, Option<QPoly>>) -> Option<QPoly> {
            if let Some(p) = memo.get(&e.id()) {
                return p.clone();
            }
            let p = match e.kind() {
                ExprKind::Var(i) => (*i < nvars).then(|| Poly::var(nvars, *i)),
                ExprKind::Const(q) => Some(Poly::constant(nvars, q.clone())),
                ExprKind::Sum(c) => c.iter().try_fold(Poly::zero(nvars), |acc, x| Some(acc.add(&go(x, nvars, memo)?))),
                ExprKind::Product(c) => c.iter().try_fold(Poly::one(nvars), |acc, x| Some(acc.mul(&go(x, nvars, memo)?))),
                ExprKind::Neg(x) => go(x, nvars, memo).map(|p| p.neg()),
                ExprKind::Sin(_) | ExprKind::Cos(_) | ExprKind::Exp(_) | ExprKind::Inv(_) => None,
            };
            memo.insert(e.id(), p.clone());
            p
        }
        go(self, nvars, &mut HashMap::new())
    }

    pub fn from_poly(p: &QPoly) -> Expr {
        Expr::sum(p.terms().map(|(m, c)| {
            let factors = m.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(Expr::var(i), e as usize));
            Expr::product(std::iter::once(Expr::constant(c.clone())).chain(factors))
        }))
    }

    pub fn is_polynomial(&self) -> bool {
        fn go(e: &Expr, memo: &mut HashMap<NodeId, bool>) -> bool {
            if let Some(&b) = memo.get(&e.id()) {
                return b;
            }
            let b = match e.kind() {
                ExprKind::Sin(_) | ExprKind::Cos(_) | ExprKind::Exp(_) | ExprKind::Inv(_) => false,
                _ => e.children().into_iter().all(|c| go(c, memo)),
            };
            memo.insert(e.id(), b);
            b
        }
        go(self, &mut HashMap::new())
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<S, Error> {
        let tape = Tape::compile(std::slice::from_ref(self));
        Ok(tape.eval(point)?.pop().unwrap())
    }

    /// Number of distinct nodes in the DAG.
    pub fn node_count(&self) -> usize {
        Tape::compile(std::slice::from_ref(self)).len()
    }
}

fn chain(outer: Expr, inner: Expr) -> Expr {
    if inner.is_zero() {
        Expr::zero()
    } else {
        Expr::product([outer, inner])
    }
}

fn sort_children(e: Expr) -> Expr {
    match e.kind() {
        ExprKind::Sum(c) => {
            let mut c = c.clone();
            c.sort();
            Expr::new(ExprKind::Sum(c))
        }
        ExprKind::Product(c) => {
            let mut c = c.clone();
            c.sort();
            Expr::new(ExprKind::Product(c))
        }
        _ => e,
    }
}

fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        let sign = if q.is_negative() { "-" } else { "" };
        write!(f, "{sign}{}/{}", q.numer().abs(), q.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, items: &[&Expr]| -> fmt::Result {
            write!(f, "({op}")?;
            for c in items {
                write!(f, " {c}")?;
            }
            write!(f, ")")
        };
        match self.kind() {
            ExprKind::Var(i) => write!(f, "x{i}"),
            ExprKind::Const(q) => fmt_rational(q, f),
            ExprKind::Sum(_) => list(f, "+", &self.children()),
            ExprKind::Product(_) => list(f, "*", &self.children()),
            ExprKind::Neg(_) => list(f, "neg", &self.children()),
            ExprKind::Sin(_) => list(f, "sin", &self.children()),
            ExprKind::Cos(_) => list(f, "cos", &self.children()),
            ExprKind::Exp(_) => list(f, "exp", &self.children()),
            ExprKind::Inv(_) => list(f, "inv", &self.children()),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(i: usize) -> Expr {
        Expr::var(i)
    }

    #[test]
    fn smart_constructors_fold() {
        assert_eq!(Expr::sum([x(0), Expr::zero()]), x(0));
        assert_eq!(Expr::product([x(0), Expr::one()]), x(0));
        assert!(Expr::product([x(0), Expr::zero()]).is_zero());
        assert_eq!(Expr::sum([Expr::integer(2), Expr::integer(3)]), Expr::integer(5));
        assert_eq!(x(0).neg().neg(), x(0));
    }

    #[test]
    fn normalization_sorts() {
        let a = x(1).add(&x(0)).add(&Expr::integer(2));
        let b = Expr::sum([Expr::integer(2), x(0), x(1)]);
        assert_ne!(a, b);
        assert_eq!(a.normalize(), b.normalize());
        let p = x(1).mul(&x(0)).neg();
        let q = Expr::product([Expr::integer(-1), x(0), x(1)]);
        assert_eq!(p.normalize(), q.normalize());
    }

    #[test]
    fn partials() {
        assert_eq!(x(0).mul(&x(1)).partial(0), x(1));
        assert_eq!(x(0).sin().partial(0), x(0).cos());
        assert!(x(0).partial(1).is_zero());
    }

    #[test]
    fn reciprocal_derivative_at_point() {
        let e = x(0).inv();
        let d = e.partial(0).eval(&[2.0]).unwrap();
        assert_eq!(d, -0.25);
        assert_eq!(e.eval(&[rat(2, 1)]).unwrap(), rat(1, 2));
        assert!(e.eval(&[rat(0, 1)]).is_err());
    }

    #[test]
    fn to_poly_expands() {
        let e = x(0).add(&x(1)).powi(2);
        let p = e.to_poly(2).unwrap();
        assert_eq!(p.to_string(), "x0^2 + 2*x0*x1 + x1^2");
        assert!(x(0).sin().to_poly(1).is_none());
        assert_eq!(Expr::from_poly(&p).to_poly(2).unwrap(), p);
    }

    #[test]
    fn display_is_s_expression() {
        let e = Expr::sum([x(0).mul(&x(1)), Expr::constant(rat(-1, 2))]);
        assert_eq!(e.to_string(), "(+ -1/2 (* x0 x1))");
    }
}
