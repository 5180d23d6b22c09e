//! Scalar abstraction shared by the numeric kernels.

use num_traits::{Float, FloatConst, NumAssign};
use std::fmt::{Debug, Display, LowerExp};

/// Real floating-point type usable by the generic kernels (`f32`, `f64`).
pub trait Real: Float + FloatConst + NumAssign + Debug + Display + LowerExp + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + NumAssign + Debug + Display + LowerExp + Send + Sync + 'static {}

/// Converts an `f64` literal into the working precision.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from(x).expect("literal representable in the working precision")
}
