//! The system catalogue: exponentially mixing maps, the arithmetic
//! boundary rotations, the non-mixing linear flows, suspension flows with
//! exact sections, and the hyperbolic geodesic flows.

pub mod continued_fraction;
pub mod geodesic;
pub mod linear_flow;
pub mod rotation;
pub mod suspension;
pub mod torus_maps;

pub use continued_fraction::{liouville_terms, Convergents};
pub use geodesic::GeodesicFlow;
pub use linear_flow::LinearFlow;
pub use rotation::{Rotation, RotationClass};
pub use suspension::{BaseMap, Roof, SuspensionFlow};
pub use torus_maps::{CatMap, DoublingMap};
