//! Commutative ℚ-algebras presented by generators: polynomial rings, monic
//! quotients `ℚ[x]/(m)`, and square-zero extensions by infinitesimals.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::Monomial;
use crate::sample::Sampler;
use crate::scalar::{int, Rational};
use crate::{QMatrix, QPoly};

/// `ℚ[x₀..x_{n-1}, ε₀..ε_{m-1}]` modulo `εᵢ² = 0`, `εᵢεⱼ = 0` for the listed
/// pairs, and `m(x₀) = 0` when a monic modulus is given (then `n = 1`).
///
/// Variables are ordered base generators first, then infinitesimals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    base: usize,
    /// Monic, coefficients from the constant term up.
    modulus: Option<Vec<Rational>>,
    infinitesimals: usize,
    orthogonal: Vec<(usize, usize)>,
}

impl Algebra {
    /// `ℚ[x₀..x_{n-1}]`.
    pub fn polynomial(n: usize) -> Self {
        Algebra { base: n, modulus: None, infinitesimals: 0, orthogonal: Vec::new() }
    }

    /// `ℚ[x]/(m)` for monic `m`, coefficients from the constant term up.
    pub fn quotient(monic: Vec<Rational>) -> Result<Self> {
        match monic.last() {
            Some(lead) if lead.is_one() && monic.len() >= 2 => {
                Ok(Algebra { base: 1, modulus: Some(monic), infinitesimals: 0, orthogonal: Vec::new() })
            }
            _ => Err(Error::invariant("monic_modulus", "modulus must be monic of degree at least 1")),
        }
    }

    /// `A[ε]` with a fresh infinitesimal.
    pub fn with_infinitesimal(&self) -> Self {
        Algebra { infinitesimals: self.infinitesimals + 1, ..self.clone() }
    }

    /// `A[ε₁..ε_k]` with `εᵢεⱼ = 0` for all `i ≠ j`: the `k`-fold pullback of
    /// `A[ε]` over `A`.
    pub fn with_orthogonal(&self, k: usize) -> Self {
        let first = self.gens();
        let mut orthogonal = self.orthogonal.clone();
        for i in 0..k {
            for j in i + 1..k {
                orthogonal.push((first + i, first + j));
            }
        }
        Algebra { infinitesimals: self.infinitesimals + k, orthogonal, ..self.clone() }
    }

    pub fn base_gens(&self) -> usize {
        self.base
    }

    pub fn infinitesimals(&self) -> usize {
        self.infinitesimals
    }

    pub fn gens(&self) -> usize {
        self.base + self.infinitesimals
    }

    pub fn modulus(&self) -> Option<&[Rational]> {
        self.modulus.as_deref()
    }

    pub fn is_finite_dimensional(&self) -> bool {
        self.base == 0 || self.modulus.is_some()
    }

    pub fn gen(&self, i: usize) -> QPoly {
        QPoly::var(self.gens(), i)
    }

    pub fn constant(&self, c: Rational) -> QPoly {
        QPoly::constant(self.gens(), c)
    }

    pub fn one(&self) -> QPoly {
        QPoly::one(self.gens())
    }

    pub fn zero(&self) -> QPoly {
        QPoly::zero(self.gens())
    }

    /// Canonical representative.
    pub fn reduce(&self, p: &QPoly) -> QPoly {
        assert_eq!(p.nvars(), self.gens(), "element of a different ring");
        let eps = self.base..self.gens();
        let killed = |m: &Monomial| eps.clone().any(|i| m[i] >= 2) || self.orthogonal.iter().any(|&(i, j)| m[i] > 0 && m[j] > 0);
        let mut out = QPoly::from_terms(self.gens(), p.terms().filter(|(m, _)| !killed(m)).map(|(m, c)| (m.clone(), c.clone())));
        let Some(modulus) = &self.modulus else { return out };
        let d = (modulus.len() - 1) as u32;
        // x₀^d = -Σ mᵢ x₀ⁱ
        loop {
            let Some((m, c)) = out.terms().find(|(m, _)| m[0] >= d).map(|(m, c)| (m.clone(), c.clone())) else {
                return out;
            };
            let mut lower = m.clone();
            lower[0] -= d;
            let mut replacement = QPoly::zero(self.gens());
            for (i, mi) in modulus[..d as usize].iter().enumerate() {
                if mi.is_zero() {
                    continue;
                }
                let mut mono = lower.clone();
                mono[0] += i as u32;
                replacement = replacement.add(&QPoly::from_terms(self.gens(), [(mono, -(c.clone() * mi.clone()))]));
            }
            let remove = QPoly::from_terms(self.gens(), [(m, c)]);
            out = out.sub(&remove).add(&replacement);
            out = QPoly::from_terms(self.gens(), out.terms().filter(|(m, _)| !killed(m)).map(|(m, c)| (m.clone(), c.clone())));
        }
    }

    pub fn add(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.add(b))
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.mul(b))
    }

    pub fn equal(&self, a: &QPoly, b: &QPoly) -> bool {
        self.reduce(a) == self.reduce(b)
    }

    /// A ℚ-basis of monomials, when finite-dimensional.
    pub fn basis(&self) -> Option<Vec<Monomial>> {
        if !self.is_finite_dimensional() {
            return None;
        }
        let xdeg = self.modulus.as_ref().map_or(1, |m| m.len() - 1);
        let mut out = Vec::new();
        for mask in 0u32..(1 << self.infinitesimals) {
            let eps: Vec<usize> = (0..self.infinitesimals).filter(|i| mask & (1 << i) != 0).map(|i| self.base + i).collect();
            if self.orthogonal.iter().any(|(i, j)| eps.contains(i) && eps.contains(j)) {
                continue;
            }
            for e in 0..xdeg {
                let mut m = vec![0; self.gens()];
                if self.base == 1 {
                    m[0] = e as u32;
                }
                for &i in &eps {
                    m[i] = 1;
                }
                out.push(m);
            }
        }
        Some(out)
    }

    pub fn dim(&self) -> Option<usize> {
        self.basis().map(|b| b.len())
    }

    /// Coordinates in [`Algebra::basis`].
    pub fn coords(&self, a: &QPoly) -> Option<Vec<Rational>> {
        let r = self.reduce(a);
        Some(self.basis()?.iter().map(|m| r.coefficient(m)).collect())
    }

    pub fn from_coords(&self, v: &[Rational]) -> Option<QPoly> {
        let basis = self.basis()?;
        Some(QPoly::from_terms(self.gens(), basis.into_iter().zip(v.iter().cloned())))
    }

    /// Matrix of multiplication by `a` in the basis (columns are images).
    pub fn regular_matrix(&self, a: &QPoly) -> Option<QMatrix> {
        let basis = self.basis()?;
        let d = basis.len();
        let mut m = Matrix::zeros(d, d);
        for (j, b) in basis.iter().enumerate() {
            let img = self.coords(&a.mul(&QPoly::from_terms(self.gens(), [(b.clone(), int(1))])))?;
            for (i, c) in img.into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        Some(m)
    }

    /// A seeded element with small rational coefficients, total degree ≤ 3.
    pub fn random_element(&self, sampler: &mut Sampler) -> QPoly {
        let mut p = self.zero();
        for _ in 0..4 {
            let mut m = vec![0u32; self.gens()];
            for _ in 0..sampler.below(4) {
                if self.gens() > 0 {
                    m[sampler.below(self.gens())] += 1;
                }
            }
            let c = sampler.rational_point(1).remove(0);
            p = p.add(&QPoly::from_terms(self.gens(), [(m, c)]));
        }
        self.reduce(&p)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<String> = (0..self.base).map(|i| format!("x{i}")).collect();
        names.extend((0..self.infinitesimals).map(|i| format!("e{i}")));
        write!(f, "Q[{}]", names.join(","))?;
        if let Some(m) = &self.modulus {
            let p = QPoly::from_terms(1, m.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())));
            write!(f, "/({p})")?;
        }
        Ok(())
    }
}

/// A ℚ-algebra map given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: Algebra,
    target: Algebra,
    images: Vec<QPoly>,
}

impl PartialEq for AlgebraMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.images.iter().zip(&other.images).all(|(a, b)| self.target.equal(a, b))
    }
}

impl AlgebraMorphism {
    /// Checks that every relation of the source maps to zero.
    pub fn new(source: Algebra, target: Algebra, images: Vec<QPoly>) -> Result<Self> {
        if images.len() != source.gens() {
            return Err(Error::dim("generator images", source.gens(), images.len()));
        }
        if let Some(bad) = images.iter().find(|p| p.nvars() != target.gens()) {
            return Err(Error::dim("image ring", target.gens(), bad.nvars()));
        }
        let images: Vec<QPoly> = images.iter().map(|p| target.reduce(p)).collect();
        let f = AlgebraMorphism { source, target, images };
        for (name, rel) in f.source.relations() {
            if !f.apply(&rel).is_zero() {
                return Err(Error::invariant("well_defined", format!("relation {name} does not map to zero")));
            }
        }
        Ok(f)
    }

    pub fn identity(a: &Algebra) -> Self {
        AlgebraMorphism { source: a.clone(), target: a.clone(), images: (0..a.gens()).map(|i| a.gen(i)).collect() }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn images(&self) -> &[QPoly] {
        &self.images
    }

    pub fn apply(&self, a: &QPoly) -> QPoly {
        if self.source.gens() == 0 {
            return self.target.constant(a.constant_term());
        }
        self.target.reduce(&a.substitute(&self.images))
    }

    /// First `self`, then `g`: substitution.
    pub fn then(&self, g: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if self.target != g.source {
            return Err(Error::BaseMismatch(format!("{} is not {}", self.target, g.source)));
        }
        Ok(AlgebraMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            images: self.images.iter().map(|p| g.apply(p)).collect(),
        })
    }
}

impl Algebra {
    /// Defining relations, named.
    pub fn relations(&self) -> Vec<(String, QPoly)> {
        let n = self.gens();
        let mut out = Vec::new();
        if let Some(m) = &self.modulus {
            let p = QPoly::from_terms(
                n,
                m.iter().enumerate().map(|(i, c)| {
                    let mut mono = vec![0; n];
                    mono[0] = i as u32;
                    (mono, c.clone())
                }),
            );
            out.push(("modulus".to_string(), p));
        }
        for i in self.base..n {
            out.push((format!("e{}^2", i - self.base), QPoly::var(n, i).pow(2)));
        }
        for &(i, j) in &self.orthogonal {
            out.push((format!("e{}e{}", i - self.base, j - self.base), QPoly::var(n, i).mul(&QPoly::var(n, j))));
        }
        out
    }
}
