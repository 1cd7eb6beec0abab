//! Scalar-generic geometry kernel: Möbius algebra, the upper half-plane,
//! and flat-torus arithmetic.

pub mod mobius;
pub mod torus;
pub mod uhp;
