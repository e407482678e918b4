//! Forward and reverse tangent structure over executable models.
//!
//! Two families of models are provided. Smooth maps between Euclidean spaces
//! ([`SmoothMap`]) carry the differential combinator `D`, the tangent functor
//! `T` with its structure maps, and the reverse combinator `R` with the linear
//! dagger. Differential bundles, the dual fibration and the linear involution
//! live in [`bundle`], chart-presented manifolds with cotangent maps, covector
//! fields and a metric-gradient optimizer in [`manifold`], and exact-rational
//! algebra models (dual numbers, Kähler differentials, derivations) in
//! [`algebra`]. [`checks`] runs the law suites that tie them together.
//!
//! Everything numeric is generic over [`Scalar`]: `f32`, `f64`, exact
//! [`Rational`], and [`Dual`] numbers over any of those.

pub mod algebra;
pub mod bundle;
pub mod checks;
pub mod dual;
pub mod error;
pub mod expr;
pub mod laws;
pub mod linalg;
pub mod manifold;
pub mod parse;
pub mod poly;
pub mod reverse;
pub mod sample;
pub mod scalar;
pub mod smooth;
pub mod tangent;
pub mod tape;

pub use dual::Dual;
pub use error::{Error, Result};
pub use expr::Expr;
pub use linalg::Matrix;
pub use poly::Poly;
pub use scalar::{Rational, Scalar};
pub use smooth::SmoothMap;

/// Polynomials with exact rational coefficients.
pub type QPoly = Poly<Rational>;
/// Exact rational matrices.
pub type QMatrix = Matrix<Rational>;
/// Double-precision matrices.
pub type RMatrix = Matrix<f64>;
/// First-order dual numbers over doubles.
pub type Dual64 = Dual<f64>;
