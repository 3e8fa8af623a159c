//! Abel-type d-plane transforms of radial functions on the affine Grassmannian,
//! real hyperbolic space and the sphere, with the Lorentz-space machinery needed to
//! test endpoint, weak-type and `L^p`-`L^q` estimates numerically.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*F64` aliases below fix
//! the precision used by the command-line harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod grassmann;
pub mod hyperbolic;
pub mod inequality;
pub mod lorentz;
pub mod profiles;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod special;
pub mod sphere;
pub mod stats;
pub mod sweep;

pub use curve::{CurvePoint, GeometryTag, TransformCurve, WeakNormGrid};
pub use error::{Error, Result};
pub use grassmann::GrassmannGeometry;
pub use hyperbolic::HyperbolicGeometry;
pub use lorentz::LorentzIndex;
pub use profiles::{
    random_step_profile, DensityExponents, Profile, ProfileFile, RadialFunction, RadialMeasure, RadialProfile, StepProfile,
};
pub use quadrature::{Estimate, Quadrature, SingularIntegrand};
pub use rng::StreamRng;
pub use scalar::{CompensatedSum, Real};
pub use sphere::SphereGeometry;
pub use sweep::SweepGrid;

pub type StepProfileF64 = StepProfile<f64>;
pub type StepProfileF32 = StepProfile<f32>;
pub type RadialProfileF64 = RadialProfile<f64>;
pub type RadialMeasureF64 = RadialMeasure<f64>;
pub type TransformCurveF64 = TransformCurve<f64>;
pub type LorentzIndexF64 = LorentzIndex<f64>;
pub type QuadratureF64 = Quadrature<f64>;
