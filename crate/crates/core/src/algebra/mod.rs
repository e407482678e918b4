//! Exact-rational algebra models: dual numbers, Kähler differentials,
//! derivations, and the ℚ-linear dual of free modules.

pub mod reverse;
pub mod ring;
pub mod tangent;
pub mod text;

pub use reverse::{derivations_reverse_tangent, module_dual_involution, FreeModuleMorphism};
pub use ring::{Algebra, AlgebraMorphism};
pub use tangent::{
    dualnum_structure, dualnum_tangent, dualnum_tangent_pullback, kahler_tangent, total_differential, DualNumberStructure, DualNumbers,
    Kahler, PolynomialMap,
};
pub use text::{parse_alghom, parse_poly};
