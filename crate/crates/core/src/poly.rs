//! Sparse multivariate polynomials in canonical sorted-monomial form.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Rational, Scalar};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable x{i} out of range for {nvars} variables");
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, S::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial has wrong arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[i]).max()
    }

    fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials in different rings");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials in different rings");
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable x{i} out of range");
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[i] -= 1;
            out.add_term(dm, c.clone() * S::from_i64(i64::from(m[i])));
        }
        out
    }

    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        self.terms.iter().fold(S::zero(), |acc, (m, c)| {
            let mono = m.iter().zip(point).fold(S::one(), |p, (&e, x)| (0..e).fold(p, |q, _| q * x.clone()));
            acc + c.clone() * mono
        })
    }

    /// Substitute `images[i]` for variable `i`; all images share one ring.
    pub fn substitute(&self, images: &[Poly<S>]) -> Poly<S> {
        assert_eq!(images.len(), self.nvars, "substitution needs one image per variable");
        let target = images.first().map_or(0, Poly::nvars);
        // cache powers per variable
        let mut powers: Vec<Vec<Poly<S>>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-embed into a ring with more variables, placing old variable `i` at
    /// `placement[i]`.
    pub fn embed(&self, nvars: usize, placement: &[usize]) -> Poly<S> {
        assert_eq!(placement.len(), self.nvars);
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut nm = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                nm[placement[i]] += e;
            }
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Widen by appending variables at the end.
    pub fn widen(&self, nvars: usize) -> Poly<S> {
        assert!(nvars >= self.nvars);
        let placement: Vec<usize> = (0..self.nvars).collect();
        self.embed(nvars, &placement)
    }

    /// Collect as a polynomial in the variables `vars`, returning the
    /// coefficient of each monomial in them (coefficients live in the full
    /// ring with those variables set to exponent zero).
    pub fn coefficients_in(&self, vars: &[usize]) -> BTreeMap<Vec<u32>, Poly<S>> {
        let mut out: BTreeMap<Vec<u32>, Poly<S>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = vars.iter().map(|&v| m[v]).collect();
            let mut rest = m.clone();
            for &v in vars {
                rest[v] = 0;
            }
            let entry = out.entry(key).or_insert_with(|| Poly::zero(self.nvars));
            entry.add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String) -> fmt::Result
    where
        S: fmt::Display,
    {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest monomials first reads naturally
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names(i) } else { format!("{}^{}", names(i), e) })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Poly<Rational> {
    pub fn eval_as<T: Scalar>(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        self.terms.iter().fold(T::zero(), |acc, (m, c)| {
            let mono = m.iter().zip(point).fold(T::one(), |p, (&e, x)| (0..e).fold(p, |q, _| q * x.clone()));
            acc + T::from_rational(c) * mono
        })
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|i| format!("x{i}"))
    }
}
