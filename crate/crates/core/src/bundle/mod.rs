//! Differential bundles, linear bundle morphisms, the dual fibration and the
//! linear involution.

pub mod cocycle;
pub mod coordinate;
pub mod fibration;
pub mod flip;
pub mod system;

pub use cocycle::{CocycleBundle, CocycleEntry};
pub use coordinate::{factor_through_pullback, CoordBundle, LinearBundleMorphism};
pub use fibration::DualFibrationMap;
pub use flip::CanonicalFlipStar;
pub use system::{DifferentialBundle, SystemOfBundles};
