//! Chart-presented manifolds: tangent and cotangent maps, covector fields,
//! étale maps and metric-gradient descent.

pub mod atlas;
pub mod field;
pub mod library;
pub mod load;
pub mod map;
pub mod optimize;
pub mod point;

pub use atlas::{Atlas, Chart, Guard, Patch, Region};
pub use field::CovectorField;
pub use map::{EtaleReport, ManifoldMap};
pub use optimize::{optimize, riemannian_gradient_step, Metric, Trace};
pub use point::{ChangeChart, Covector, ManifoldPoint, TangentVec};
