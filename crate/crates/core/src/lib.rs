//! Numerics for Blaschke-type conditions on zeros of analytic functions in the
//! unit disc, measured against non-radial weights.
//!
//! The crate is `no_std` and needs only `alloc`. Everything that touches files,
//! threads or the command line lives in the companion `blaschke-lab` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod funcs;
pub mod green;
pub mod lemmas;
pub mod math;
pub mod nevan;
pub mod quad;
pub mod weights;
pub mod zeros;

pub use error::{Error, Result};
pub use funcs::{AnalyticFunctionSpec, FamilyTag, GrowthBound, Zero};
pub use math::Complex;
pub use quad::{DiscPoint, QuadratureConfig, QuadratureResult};
pub use weights::{ClosedArcSet, MixedWeightSpec, RationalWeightSpec, TildeMode};
pub use zeros::{Region, ZeroSet};
