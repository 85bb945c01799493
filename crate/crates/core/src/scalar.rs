//! Scalar abstraction for the numeric core.
//!
//! All linear algebra, filter design and feature extraction code is generic
//! over [`Scalar`] so the same routines run in `f32` or `f64`. The pipeline
//! and every on-disk format use the `f64` instantiation (see the type
//! aliases at the crate root); the stated tolerances assume it.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the crate.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for tolerances and literals.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }

    /// Lossy conversion to `f64`, used for reporting and diagnostics.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
