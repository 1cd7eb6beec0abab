//! Unit-speed linear flow on the 2-torus: ergodic for irrational slope
//! but never mixing — the boundary class where hitting-time laws can fail.

use crate::dynamics::{check_dt, PhasePoint, System, TimeKind};
use crate::error::{Error, Result};
use crate::geom::torus::wrap_unit;
use crate::rng::RngStream;

#[derive(Debug, Clone)]
pub struct LinearFlow {
    name: String,
    slope: f64,
    vx: f64,
    vy: f64,
}

impl LinearFlow {
    pub fn new(name: &str, slope: f64) -> Result<Self> {
        if !slope.is_finite() {
            return Err(Error::InvalidArgument(format!("bad slope {slope}")));
        }
        let norm = (1.0 + slope * slope).sqrt();
        Ok(LinearFlow {
            name: name.to_string(),
            slope,
            vx: 1.0 / norm,
            vy: slope / norm,
        })
    }

    pub fn golden() -> Self {
        Self::new("linear-flow-golden", (5.0f64.sqrt() - 1.0) / 2.0).unwrap()
    }

    pub fn unit_slope() -> Self {
        Self::new("linear-flow-unit", 1.0).unwrap()
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn velocity(&self) -> (f64, f64) {
        (self.vx, self.vy)
    }
}

impl System for LinearFlow {
    fn name(&self) -> &str {
        &self.name
    }
    fn time_kind(&self) -> TimeKind {
        TimeKind::Flow
    }
    fn dimension(&self) -> usize {
        2
    }
    fn velocity_bound(&self) -> f64 {
        1.0
    }
    fn parameters(&self) -> Vec<(String, f64)> {
        vec![("slope".into(), self.slope)]
    }

    fn advance(&self, x: &PhasePoint, dt: f64) -> Result<PhasePoint> {
        check_dt(TimeKind::Flow, dt)?;
        let c = x.as_coords()?;
        if c.len() != 2 || !c.is_finite() {
            return Err(Error::NumericDomain(format!("bad flow state {c:?}")));
        }
        let s = c.as_slice();
        Ok(PhasePoint::coords(&[
            wrap_unit(s[0] + dt * self.vx),
            wrap_unit(s[1] + dt * self.vy),
        ]))
    }

    fn sample_invariant(&self, rng: &mut RngStream) -> Result<PhasePoint> {
        Ok(PhasePoint::coords(&[rng.uniform(), rng.uniform()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::torus::torus_dist;

    #[test]
    fn unit_slope_quarter_time() {
        // Slope 1 at unit speed moves 0.25/sqrt(2) in each coordinate per
        // quarter unit of time; the closed-form example uses t = 0.25 of
        // the diagonal parameterization.
        let flow = LinearFlow::unit_slope();
        let t = 0.25 * 2.0f64.sqrt();
        let y = flow.advance(&PhasePoint::coords(&[0.0, 0.0]), t).unwrap();
        let s = y.as_coords().unwrap().as_slice().to_vec();
        assert!((s[0] - 0.25).abs() < 1e-15);
        assert!((s[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn flow_property_composes() {
        let flow = LinearFlow::golden();
        let x = PhasePoint::coords(&[0.2, 0.7]);
        let a = flow.advance(&flow.advance(&x, 0.7).unwrap(), 1.6).unwrap();
        let b = flow.advance(&x, 2.3).unwrap();
        let d = torus_dist(
            a.as_coords().unwrap().as_slice(),
            b.as_coords().unwrap().as_slice(),
        );
        assert!(d < 1e-12);
    }

    #[test]
    fn speed_is_one() {
        let flow = LinearFlow::golden();
        let x = PhasePoint::coords(&[0.1, 0.1]);
        let t = 0.01;
        let y = flow.advance(&x, t).unwrap();
        let d = torus_dist(
            x.as_coords().unwrap().as_slice(),
            y.as_coords().unwrap().as_slice(),
        );
        assert!((d - t).abs() < 1e-12);
    }

    #[test]
    fn negative_time_is_rejected() {
        let flow = LinearFlow::golden();
        let x = PhasePoint::coords(&[0.1, 0.1]);
        assert!(flow.advance(&x, -1.0).is_err());
    }
}
