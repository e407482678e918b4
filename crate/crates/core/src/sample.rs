//! Seeded sampling and the map-comparison oracle used by every law check.
//!
//! Two maps are compared in the cheapest way that decides the question:
//! equal normal forms, then exact polynomial identity when both sides are
//! polynomial, and otherwise agreement at seeded random points in a box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::scalar::{rat, Rational};
use crate::smooth::SmoothMap;

pub const DEFAULT_SEED: u64 = 42;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform point in `[lo, hi]ⁿ`.
    pub fn point(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.rng.gen_range(lo..=hi)).collect()
    }

    pub fn points(&mut self, n: usize, count: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
        (0..count).map(|_| self.point(n, lo, hi)).collect()
    }

    /// Point in a box given per coordinate.
    pub fn point_in(&mut self, bounds: &[(f64, f64)]) -> Vec<f64> {
        bounds.iter().map(|&(lo, hi)| self.rng.gen_range(lo..=hi)).collect()
    }

    /// Rational point in `[-2, 2]ⁿ` with denominators up to 8.
    pub fn rational_point(&mut self, n: usize) -> Vec<Rational> {
        (0..n)
            .map(|_| {
                let d = self.rng.gen_range(1..=8i64);
                let k = self.rng.gen_range(-2 * d..=2 * d);
                rat(k, d)
            })
            .collect()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Structural,
    Polynomial,
    Exact,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct Agreement {
    pub method: Method,
    pub holds: bool,
    pub points: usize,
    pub max_error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Agreement {
    pub fn exact(method: Method, holds: bool) -> Self {
        Agreement { method, holds, points: 0, max_error: 0.0, tolerance: 0.0, witness: None, note: None }
    }

    pub fn failed(note: impl Into<String>) -> Self {
        Agreement { note: Some(note.into()), ..Agreement::exact(Method::Structural, false) }
    }

    /// Fold several agreements into one, keeping the weakest method and the
    /// first failure.
    pub fn all(parts: impl IntoIterator<Item = Agreement>) -> Agreement {
        let mut out: Option<Agreement> = None;
        for a in parts {
            out = Some(match out {
                None => a,
                Some(acc) if !acc.holds => acc,
                Some(_) if !a.holds => a,
                Some(mut acc) => {
                    let rank = |m: Method| match m {
                        Method::Structural => 0,
                        Method::Polynomial => 1,
                        Method::Exact => 2,
                        Method::Numeric => 3,
                    };
                    if rank(a.method) > rank(acc.method) {
                        acc.method = a.method;
                    }
                    acc.points += a.points;
                    acc.max_error = acc.max_error.max(a.max_error);
                    acc.tolerance = acc.tolerance.max(a.tolerance);
                    acc
                }
            });
        }
        out.unwrap_or_else(|| Agreement::exact(Method::Structural, true))
    }
}

/// Largest relative discrepancy `|a-b| / max(1,|a|,|b|)`.
pub fn max_rel_error(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| if x == y { 0.0 } else { (x - y).abs() / 1f64.max(x.abs()).max(y.abs()) }).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct Compare {
    pub seed: u64,
    pub points: usize,
    pub tol: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Compare {
    pub fn new(seed: u64, points: usize, tol: f64) -> Self {
        Compare { seed, points, tol, lo: -2.0, hi: 2.0 }
    }

    pub fn with_box(mut self, lo: f64, hi: f64) -> Self {
        self.lo = lo;
        self.hi = hi;
        self
    }

    pub fn maps(&self, lhs: &SmoothMap, rhs: &SmoothMap) -> Agreement {
        if lhs.dom() != rhs.dom() || lhs.cod() != rhs.cod() {
            return Agreement::failed(format!("types differ: {}→{} vs {}→{}", lhs.dom(), lhs.cod(), rhs.dom(), rhs.cod()));
        }
        if lhs.structurally_equal(rhs) {
            return Agreement::exact(Method::Structural, true);
        }
        if let (Some(p), Some(q)) = (lhs.to_polys(), rhs.to_polys()) {
            let holds = p == q;
            let mut a = Agreement::exact(Method::Polynomial, holds);
            if !holds {
                let numeric = self.numeric(lhs, rhs);
                a.witness = numeric.witness;
                a.max_error = numeric.max_error;
            }
            return a;
        }
        self.numeric(lhs, rhs)
    }

    /// Pointwise comparison only, regardless of structure.
    pub fn numeric(&self, lhs: &SmoothMap, rhs: &SmoothMap) -> Agreement {
        let mut sampler = Sampler::new(self.seed);
        let mut max_error: f64 = 0.0;
        let mut witness = None;
        let mut used = 0;
        let mut attempts = 0;
        while used < self.points && attempts < self.points * 20 {
            attempts += 1;
            let x = sampler.point(lhs.dom(), self.lo, self.hi);
            let (a, b) = match (lhs.eval(&x), rhs.eval(&x)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(_), Err(_)) => continue,
                _ => return Agreement { witness: Some(x), ..Agreement::failed("one side is undefined where the other is defined") },
            };
            if a.iter().chain(&b).any(|v| !v.is_finite()) {
                continue;
            }
            used += 1;
            let err = max_rel_error(&a, &b);
            if err > max_error {
                max_error = err;
                if err > self.tol {
                    witness = Some(x);
                }
            }
        }
        Agreement {
            method: Method::Numeric,
            holds: used > 0 && max_error <= self.tol,
            points: used,
            max_error,
            tolerance: self.tol,
            witness,
            note: (used == 0).then(|| "no sample point was in the common domain".to_string()),
        }
    }

    /// Exact comparison at seeded rational points; suits rational functions.
    pub fn exact_points(&self, lhs: &SmoothMap, rhs: &SmoothMap) -> Agreement {
        let mut sampler = Sampler::new(self.seed);
        let mut used = 0;
        for _ in 0..self.points * 4 {
            if used == self.points {
                break;
            }
            let x = sampler.rational_point(lhs.dom());
            match (lhs.eval_exact(&x), rhs.eval_exact(&x)) {
                (Ok(a), Ok(b)) => {
                    used += 1;
                    if a != b {
                        let w = x.iter().map(crate::scalar::rational_to_f64).collect();
                        return Agreement { witness: Some(w), points: used, ..Agreement::exact(Method::Exact, false) };
                    }
                }
                _ => continue,
            }
        }
        Agreement { points: used, ..Agreement::exact(Method::Exact, used > 0) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_reproducible() {
        let a = Sampler::new(7).points(3, 5, -2.0, 2.0);
        let b = Sampler::new(7).points(3, 5, -2.0, 2.0);
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|v| (-2.0..=2.0).contains(v)));
    }

    #[test]
    fn polynomial_identity_is_exact() {
        let lhs = SmoothMap::parse("(map 2 1 (* (+ x0 x1) (+ x0 x1)))").unwrap();
        let rhs = SmoothMap::parse("(map 2 1 (+ (* x0 x0) (* 2 x0 x1) (* x1 x1)))").unwrap();
        let a = Compare::new(1, 10, 0.0).maps(&lhs, &rhs);
        assert!(a.holds);
        assert_eq!(a.method, Method::Polynomial);
    }

    #[test]
    fn numeric_disagreement_has_witness() {
        let lhs = SmoothMap::parse("(map 1 1 (sin x0))").unwrap();
        let rhs = SmoothMap::parse("(map 1 1 (cos x0))").unwrap();
        let a = Compare::new(1, 10, 1e-9).maps(&lhs, &rhs);
        assert!(!a.holds);
        assert!(a.witness.is_some());
    }
}
