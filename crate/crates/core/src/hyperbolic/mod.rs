//! Exact geodesic-flow dynamics on the unit tangent bundle of hyperbolic
//! surfaces: Möbius algebra, fundamental domains, Liouville sampling, and
//! target geometry for entry scans.

pub mod domain;
pub mod liouville;
pub mod sasaki;
pub mod scan;
pub mod tangent;
pub mod translates;

pub use domain::{DomainVariant, FuchsianDomain};
pub use liouville::{estimate_area, liouville_sample};
pub use sasaki::sasaki_distance;
pub use scan::{
    base_ball_entries_multi, base_ball_first_entry, run_max_curve, run_min_curve,
    sasaki_ball_first_entry, RunMinCurve, ScanOutcome,
};
pub use tangent::{geodesic_advance, UnitTangent};
pub use translates::TranslateCache;
