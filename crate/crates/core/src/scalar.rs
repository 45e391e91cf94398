//! Scalar abstraction for the closed-form layer.
//!
//! Everything in this crate is elementary real arithmetic, so the math is
//! written once, generic over the float width. `f64` is the default used by
//! the simulator and the CLI; `f32` instantiations exist for callers that
//! embed the formulas in single-precision pipelines.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` constant (tolerance, grid step, literal) into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy view of the value as `f64`, for diagnostics and error messages.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// SIR in decibels: `10 log10(linear)`.
pub fn to_db<T: Real>(linear: T) -> T {
    T::lit(10.0) * linear.log10()
}

/// Linear SIR from decibels.
pub fn from_db<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}
