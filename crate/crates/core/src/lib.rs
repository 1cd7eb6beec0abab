//! A computational ergodic-theory laboratory.
//!
//! Simulates measure-preserving maps and flows with exact closed-form
//! steps, measures hitting times to shrinking targets, and estimates the
//! scaling exponents that relate hitting times to target measure. The
//! geodesic flow on compact hyperbolic surfaces (the Bolza octagon
//! surface) is the flagship system; torus maps, circle rotations, linear
//! torus flows and suspension flows span the mixing/non-mixing boundary.

pub mod dynamics;
pub mod error;
pub mod estimators;
pub mod geom;
pub mod hyperbolic;
pub mod rng;
pub mod scalar;
pub mod systems;
pub mod targets;

pub use error::{Error, Result};

/// Concrete scalar aliases: the geometry kernel is generic over the
/// floating-point type, everything above it runs in f64.
pub type Mobius = geom::mobius::Mobius<f64>;
pub type Complex = num_complex::Complex<f64>;
