//! The scalar abstraction every model in the crate is generic over.
//!
//! Floating types evaluate the full generator set. Exact rationals evaluate
//! the polynomial/rational fragment and refuse transcendental nodes, which is
//! how "exact mode" is selected. [`Dual`](crate::dual::Dual) layers forward
//! derivatives on top of any other scalar.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    /// Nearest double; for dual numbers this is the primal part.
    fn to_f64(&self) -> f64;

    fn try_sin(&self) -> Option<Self>;
    fn try_cos(&self) -> Option<Self>;
    fn try_exp(&self) -> Option<Self>;

    /// `None` when `self` is zero.
    fn try_recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// Size used for pivot selection in elimination.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(q: &Rational) -> Self {
                rational_to_f64(q) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn try_sin(&self) -> Option<Self> {
                Some(self.sin())
            }

            fn try_cos(&self) -> Option<Self> {
                Some(self.cos())
            }

            fn try_exp(&self) -> Option<Self> {
                Some(self.exp())
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn try_sin(&self) -> Option<Self> {
        self.is_zero().then(Rational::zero)
    }

    fn try_cos(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }

    fn try_exp(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // huge numerators/denominators: scale both down first
        _ => {
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Exact rational with the same value as a finite double.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    let scale = 1f64.max(a.abs()).max(b.abs());
    (a - b).abs() <= tol * scale
}
