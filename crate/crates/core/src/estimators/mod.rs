//! The measurable quantities: hitting times and their scaling exponents,
//! cylinder measures and the conditional dimension, correlation decay,
//! section reductions, and excursion laws.

pub mod correlation;
pub mod cylinder;
pub mod excursion;
pub mod exponent;
pub mod fit;
pub mod hitting;
pub mod section;

pub use correlation::{correlation_curve, CorrelationCurve, Decay, Observable};
pub use cylinder::{
    conditional_dimension, cylinder_measure, ConditionalDimension, CylinderEstimate,
};
pub use excursion::{cusp_excursion, excursion_curve, CuspCurve, ExcursionCurve};
pub use exponent::{
    collect_hits, fit_from_records, hitting_exponent, ExponentFit, RadiusSchedule, TMaxRule,
};
pub use fit::{loglog_fit, median, LinearFit};
pub use hitting::{hitting_time, hitting_times_multi, HitRecord};
pub use section::{section_check, SectionReport};
