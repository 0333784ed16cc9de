//! Menger probabilistic cone metric spaces.
//!
//! The crate models spaces whose "distance" between two points is a
//! distribution function evaluated at vectors drawn from the interior of a
//! cone. It provides:
//!
//! - [`cone`]: the nonnegative-orthant cone with its orders and normality estimate,
//! - [`tnorm`]: the product and minimum t-norms,
//! - [`pcm_space`]: carriers, kernel families and sampled axiom checks,
//! - [`topology`]: (ε,λ)-neighborhoods, separation, diameters and covers,
//! - [`convexity`]: convex structures and the probabilistic convexity conditions,
//! - [`fixedpoint`]: self-map pairs, their hypotheses and a common-fixed-point search.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.

pub mod cone;
pub mod convexity;
pub mod error;
pub mod fixedpoint;
pub mod pcm_space;
pub mod report;
pub mod scalar;
pub mod tnorm;
pub mod topology;

pub use cone::{ConeKind, ConeSpec, Norm, Order, Vector};
pub use convexity::{ConvexStructure, IntervalSet};
pub use error::{Error, Result};
pub use fixedpoint::{FixedPointConfig, FixedPointResult, MapKind, Method, SelfMap};
pub use pcm_space::{Carrier, ConeMetric, Kernel, KernelFamily, PcmSpace, Scalarizer};
pub use report::{AxiomCheck, AxiomReport, CheckBuilder, Status, Witness, WitnessItem};
pub use scalar::Real;
pub use tnorm::TNorm;
pub use topology::{DiameterProfile, HausdorffWitness, Neighborhood, Nondiametral, Verdict};

pub type Vector64 = Vector<f64>;
pub type Vector32 = Vector<f32>;
pub type Kernel64 = Kernel<f64>;
pub type Carrier64 = Carrier<f64>;
pub type PcmSpace64 = PcmSpace<f64>;
pub type PcmSpace32 = PcmSpace<f32>;
pub type Neighborhood64 = Neighborhood<f64>;
pub type ConvexStructure64 = ConvexStructure<f64>;
pub type SelfMap64 = SelfMap<f64>;
pub type FixedPointResult64 = FixedPointResult<f64>;
