//! Floating scalar abstraction for the numeric layer.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Scalar type the numeric layer is generic over.
///
/// `f32` and `f64` both satisfy the bound; the crate-root aliases pin `f64`,
/// which is what the stated tolerances assume.
pub trait Scalar:
    Float + FromPrimitive + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + Sum<T> + Debug + Display + Send + Sync + 'static
{
}
