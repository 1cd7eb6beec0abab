//! Geodesic flow on the unit tangent bundle of a hyperbolic quotient.

use std::sync::Arc;

use crate::dynamics::{check_dt, PhasePoint, System, TimeKind};
use crate::error::{Error, Result};
use crate::hyperbolic::domain::{DomainVariant, FuchsianDomain};
use crate::hyperbolic::liouville::liouville_sample;
use crate::hyperbolic::scan::WINDOW;
use crate::rng::RngStream;

/// The geodesic flow on T^1 of the quotient surface; states are reduced
/// unit tangents, advancement is exact group multiplication window by
/// window (the same pseudo-orbit schedule the entry scans use).
#[derive(Debug, Clone)]
pub struct GeodesicFlow {
    domain: Arc<FuchsianDomain>,
}

impl GeodesicFlow {
    pub fn new(domain: Arc<FuchsianDomain>) -> Self {
        GeodesicFlow { domain }
    }

    pub fn bolza() -> Self {
        Self::new(Arc::new(FuchsianDomain::bolza()))
    }

    pub fn modular() -> Self {
        Self::new(Arc::new(FuchsianDomain::modular()))
    }

    pub fn domain(&self) -> &Arc<FuchsianDomain> {
        &self.domain
    }
}

impl System for GeodesicFlow {
    fn name(&self) -> &str {
        match self.domain.variant() {
            DomainVariant::Modular => "modular",
            DomainVariant::Bolza => "bolza",
        }
    }
    fn time_kind(&self) -> TimeKind {
        TimeKind::Flow
    }
    fn dimension(&self) -> usize {
        3
    }
    fn velocity_bound(&self) -> f64 {
        1.0
    }
    fn parameters(&self) -> Vec<(String, f64)> {
        vec![("area".into(), self.domain.area())]
    }

    fn advance(&self, x: &PhasePoint, dt: f64) -> Result<PhasePoint> {
        check_dt(TimeKind::Flow, dt)?;
        let u = x.as_tangent()?;
        if !u.is_finite() {
            return Err(Error::NumericDomain("non-finite unit tangent".into()));
        }
        // March whole windows, then the remainder, reducing as the scans do.
        let mut cur = *u;
        let mut remaining = dt;
        while remaining > WINDOW {
            cur = self.domain.reduce(&cur.advance(WINDOW))?.0;
            remaining -= WINDOW;
        }
        cur = self.domain.reduce(&cur.advance(remaining))?.0;
        Ok(PhasePoint::Tangent(cur))
    }

    fn sample_invariant(&self, rng: &mut RngStream) -> Result<PhasePoint> {
        Ok(PhasePoint::Tangent(liouville_sample(&self.domain, rng)?))
    }
}
