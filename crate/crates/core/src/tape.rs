//! Flattened evaluation order for a set of expressions sharing one DAG.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expr::{Expr, ExprKind};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug)]
enum Op {
    Var(usize),
    Const(Rational),
    Sum(Vec<usize>),
    Product(Vec<usize>),
    Neg(usize),
    Sin(usize),
    Cos(usize),
    Exp(usize),
    Inv(usize),
}

#[derive(Clone, Debug)]
pub struct Tape {
    ops: Vec<Op>,
    outputs: Vec<usize>,
    arity: usize,
}

impl Tape {
    pub fn compile(exprs: &[Expr]) -> Tape {
        let mut tape = Tape { ops: Vec::new(), outputs: Vec::new(), arity: 0 };
        let mut seen = HashMap::new();
        for e in exprs {
            let slot = tape.push(e, &mut seen);
            tape.outputs.push(slot);
        }
        tape
    }

    fn push(&mut self, e: &Expr, seen: &mut HashMap<*const ExprKind, usize>) -> usize {
        if let Some(&slot) = seen.get(&e.id()) {
            return slot;
        }
        let op = match e.kind() {
            ExprKind::Var(i) => {
                self.arity = self.arity.max(i + 1);
                Op::Var(*i)
            }
            ExprKind::Const(q) => Op::Const(q.clone()),
            ExprKind::Sum(c) => Op::Sum(c.iter().map(|x| self.push(x, seen)).collect()),
            ExprKind::Product(c) => Op::Product(c.iter().map(|x| self.push(x, seen)).collect()),
            ExprKind::Neg(x) => Op::Neg(self.push(x, seen)),
            ExprKind::Sin(x) => Op::Sin(self.push(x, seen)),
            ExprKind::Cos(x) => Op::Cos(self.push(x, seen)),
            ExprKind::Exp(x) => Op::Exp(self.push(x, seen)),
            ExprKind::Inv(x) => Op::Inv(self.push(x, seen)),
        };
        self.ops.push(op);
        let slot = self.ops.len() - 1;
        seen.insert(e.id(), slot);
        slot
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Smallest input length the tape can be evaluated on.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<Vec<S>> {
        if point.len() < self.arity {
            return Err(Error::dim("evaluation point", self.arity, point.len()));
        }
        let mut vals: Vec<S> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match op {
                Op::Var(i) => point[*i].clone(),
                Op::Const(q) => S::from_rational(q),
                Op::Sum(c) => c.iter().fold(S::zero(), |acc, &k| acc + vals[k].clone()),
                Op::Product(c) => c.iter().fold(S::one(), |acc, &k| acc * vals[k].clone()),
                Op::Neg(k) => -vals[*k].clone(),
                Op::Sin(k) => vals[*k].try_sin().ok_or(Error::Inexact("sin"))?,
                Op::Cos(k) => vals[*k].try_cos().ok_or(Error::Inexact("cos"))?,
                Op::Exp(k) => vals[*k].try_exp().ok_or(Error::Inexact("exp"))?,
                Op::Inv(k) => {
                    let x = &vals[*k];
                    if x.is_zero() || (!S::EXACT && x.magnitude() == 0.0) {
                        return Err(Error::DivisionByZero);
                    }
                    x.try_recip().ok_or(Error::DivisionByZero)?
                }
            };
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|&k| vals[k].clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn shared_nodes_are_compiled_once() {
        let s = Expr::var(0).mul(&Expr::var(1));
        let e = Expr::sum([s.sin(), s.cos(), s.clone()]);
        let tape = Tape::compile(&[e, s]);
        // x0, x1, product, sin, cos, sum
        assert_eq!(tape.len(), 6);
        let out = tape.eval(&[rat(2, 1), rat(0, 1)]).unwrap();
        assert_eq!(out, vec![rat(1, 1), rat(0, 1)]);
    }

    #[test]
    fn short_points_are_rejected() {
        let tape = Tape::compile(&[Expr::var(2)]);
        assert!(matches!(tape.eval(&[1.0, 2.0]), Err(Error::Dimension { .. })));
    }
}
