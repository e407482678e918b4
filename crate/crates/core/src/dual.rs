//! First-order dual numbers `a + b·ε` with `ε² = 0`, over any [`Scalar`].
//!
//! Nesting (`Dual<Dual<f64>>`) gives mixed second derivatives, which is what
//! the tangent of a cocycle bundle needs when its transitions are themselves
//! derived (inverses, duals, pullbacks).

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Dual<S> {
    pub re: S,
    pub eps: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(re: S, eps: S) -> Self {
        Dual { re, eps }
    }

    pub fn constant(re: S) -> Self {
        Dual { re, eps: S::zero() }
    }

    pub fn variable(re: S) -> Self {
        Dual { re, eps: S::one() }
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = self.re.clone() * rhs.eps + self.eps * rhs.re.clone();
        Dual::new(self.re * rhs.re, eps)
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let denom = rhs.re.clone() * rhs.re.clone();
        let eps = (self.eps * rhs.re.clone() - self.re.clone() * rhs.eps) / denom;
        Dual::new(self.re / rhs.re, eps)
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<S: Scalar> Zero for Dual<S> {
    fn zero() -> Self {
        Dual::constant(S::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl<S: Scalar> One for Dual<S> {
    fn one() -> Self {
        Dual::constant(S::one())
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    const EXACT: bool = S::EXACT;

    fn from_rational(q: &Rational) -> Self {
        Dual::constant(S::from_rational(q))
    }

    fn to_f64(&self) -> f64 {
        self.re.to_f64()
    }

    fn try_sin(&self) -> Option<Self> {
        let (s, c) = (self.re.try_sin()?, self.re.try_cos()?);
        Some(Dual::new(s, c * self.eps.clone()))
    }

    fn try_cos(&self) -> Option<Self> {
        let (s, c) = (self.re.try_sin()?, self.re.try_cos()?);
        Some(Dual::new(c, -(s * self.eps.clone())))
    }

    fn try_exp(&self) -> Option<Self> {
        let e = self.re.try_exp()?;
        Some(Dual::new(e.clone(), e * self.eps.clone()))
    }

    fn try_recip(&self) -> Option<Self> {
        let r = self.re.try_recip()?;
        let eps = -(r.clone() * r.clone() * self.eps.clone());
        Some(Dual::new(r, eps))
    }

    fn magnitude(&self) -> f64 {
        self.re.magnitude()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule() {
        let x = Dual::variable(3.0);
        let y = x.clone() * x.clone() * x;
        assert_eq!(y, Dual::new(27.0, 27.0));
    }

    #[test]
    fn nested_duals_give_second_derivative() {
        // d²/dx² sin(x) = -sin(x)
        let x: Dual<Dual<f64>> = Dual::new(Dual::variable(0.7), Dual::one());
        let s = x.try_sin().unwrap();
        assert!((s.eps.eps + 0.7f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_derivative() {
        let x = Dual::variable(2.0);
        let r = x.try_recip().unwrap();
        assert_eq!(r, Dual::new(0.5, -0.25));
    }
}
