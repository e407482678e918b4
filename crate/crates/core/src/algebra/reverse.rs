//! The reverse side: derivations on polynomial rings and the ℚ-linear dual of
//! free modules over finite-dimensional algebras.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::{QMatrix, QPoly};

use super::ring::{Algebra, AlgebraMorphism};

/// For `f: A → B` with `A = ℚ[x₁..x_n]`, `B = ℚ[y₁..y_m]`: the map
/// `T*(B) = ℚ[y, ∂^B] → B ⊗_A T*(A) = ℚ[y, ∂^A]` with `b ↦ b ⊗ 1` and
/// `D ↦ Σᵢ D(f(xᵢ)) ⊗ ∂ᵢ`.
pub fn derivations_reverse_tangent(f: &AlgebraMorphism) -> Result<AlgebraMorphism> {
    let plain = |a: &Algebra| a.modulus().is_none() && a.infinitesimals() == 0;
    if !plain(f.source()) || !plain(f.target()) {
        return Err(Error::Unsupported("derivations of a non-polynomial algebra".into()));
    }
    let (n, m) = (f.source().gens(), f.target().gens());
    let out = m + n;
    let mut images: Vec<QPoly> = (0..m).map(|j| QPoly::var(out, j)).collect();
    for j in 0..m {
        let d = f
            .images()
            .iter()
            .enumerate()
            .fold(QPoly::zero(out), |acc, (i, fi)| acc.add(&fi.partial(j).widen(out).mul(&QPoly::var(out, m + i))));
        images.push(d);
    }
    AlgebraMorphism::new(Algebra::polynomial(2 * m), Algebra::polynomial(out), images)
}

/// An `A`-linear map `Aʳ → Aˢ` as an `s × r` matrix over `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeModuleMorphism {
    algebra: Algebra,
    entries: Vec<Vec<QPoly>>,
    rank_in: usize,
}

impl FreeModuleMorphism {
    pub fn new(algebra: Algebra, rank_in: usize, entries: Vec<Vec<QPoly>>) -> Result<Self> {
        if let Some(row) = entries.iter().find(|r| r.len() != rank_in) {
            return Err(Error::dim("module matrix row", rank_in, row.len()));
        }
        let entries = entries.iter().map(|r| r.iter().map(|e| algebra.reduce(e)).collect()).collect();
        Ok(FreeModuleMorphism { algebra, entries, rank_in })
    }

    pub fn identity(algebra: &Algebra, rank: usize) -> Self {
        let entries = (0..rank).map(|i| (0..rank).map(|j| if i == j { algebra.one() } else { algebra.zero() }).collect()).collect();
        FreeModuleMorphism { algebra: algebra.clone(), entries, rank_in: rank }
    }

    /// Multiplication by `a` on `A`.
    pub fn scalar(algebra: &Algebra, a: &QPoly) -> Self {
        FreeModuleMorphism { algebra: algebra.clone(), entries: vec![vec![algebra.reduce(a)]], rank_in: 1 }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn rank_in(&self) -> usize {
        self.rank_in
    }

    pub fn rank_out(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<QPoly>] {
        &self.entries
    }

    /// `Σⱼ gᵢⱼ vⱼ`
    pub fn apply(&self, v: &[QPoly]) -> Vec<QPoly> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).fold(self.algebra.zero(), |acc, (g, x)| self.algebra.add(&acc, &self.algebra.mul(g, x))))
            .collect()
    }

    /// First `self`, then `h`: the matrix product `H G`.
    pub fn then(&self, h: &FreeModuleMorphism) -> Result<FreeModuleMorphism> {
        if self.algebra != h.algebra || h.rank_in != self.rank_out() {
            return Err(Error::dim("module composition", h.rank_in, self.rank_out()));
        }
        let entries = h.entries.iter().map(|row| {
            (0..self.rank_in)
                .map(|j| {
                    row.iter()
                        .enumerate()
                        .fold(self.algebra.zero(), |acc, (k, hk)| self.algebra.add(&acc, &self.algebra.mul(hk, &self.entries[k][j])))
                })
                .collect()
        });
        Ok(FreeModuleMorphism { algebra: self.algebra.clone(), entries: entries.collect(), rank_in: self.rank_in })
    }

    /// The ℚ-matrix in the standard basis of `Aʳ` (block `(i, j)` is the
    /// regular representation of `gᵢⱼ`).
    pub fn to_rational_matrix(&self) -> Result<QMatrix> {
        let d = self.algebra.dim().ok_or_else(infinite)?;
        let mut out = Matrix::zeros(self.rank_out() * d, self.rank_in * d);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let block = self.algebra.regular_matrix(e).ok_or_else(infinite)?;
                for a in 0..d {
                    for b in 0..d {
                        out[(i * d + a, j * d + b)] = block[(a, b)].clone();
                    }
                }
            }
        }
        Ok(out)
    }
}

fn infinite() -> Error {
    Error::Unsupported("the algebra is not finite-dimensional over Q".into())
}

/// `g⊛(φ) = φ ∘ g` on `Hom_ℚ(Aˢ, ℚ) → Hom_ℚ(Aʳ, ℚ)`, in dual bases: the
/// transpose of the ℚ-matrix of `g`.
pub fn module_dual_involution(g: &FreeModuleMorphism) -> Result<QMatrix> {
    Ok(g.to_rational_matrix()?.transpose())
}

/// The ℚ-matrix of `a` acting diagonally on `Aʳ`.
pub fn action_matrix(algebra: &Algebra, rank: usize, a: &QPoly) -> Result<QMatrix> {
    FreeModuleMorphism::new(
        algebra.clone(),
        rank,
        (0..rank).map(|i| (0..rank).map(|j| if i == j { a.clone() } else { algebra.zero() }).collect()).collect(),
    )?
    .to_rational_matrix()
}
