//! Scalar abstraction for the geometry kernel.
//!
//! The low-level math (Möbius algebra, hyperbolic distances, torus
//! arithmetic, regression) is generic over the floating-point type; the
//! simulation and estimator layers use the `f64` aliases exported at the
//! crate root.

use std::fmt::Debug;

/// Floating-point scalar: f32 or f64.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Lossless widening to f64 for reporting.
    fn to_f64(self) -> f64;

    /// Conversion from f64 constants (rounds for f32).
    fn from_f64_c(v: f64) -> Self;
}

impl Real for f32 {
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn from_f64_c(v: f64) -> Self {
        v as f32
    }
}

impl Real for f64 {
    fn to_f64(self) -> f64 {
        self
    }
    fn from_f64_c(v: f64) -> Self {
        v
    }
}
