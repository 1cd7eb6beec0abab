//! Suspension flows over torus maps: flow upward at unit speed under a
//! roof function, applying the base map at each ceiling crossing.
//!
//! Ceiling crossings are resolved exactly (the roof is evaluated in closed
//! form), never by time-step overshoot, so the section return-time
//! identity holds to machine precision.

use crate::dynamics::{check_dt, CoordVec, PhasePoint, System, TimeKind};
use crate::error::{Error, Result};
use crate::geom::torus::wrap_unit;
use crate::rng::RngStream;
use crate::systems::torus_maps::CatMap;

/// Base map of the suspension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseMap {
    Cat,
    Doubling,
}

impl BaseMap {
    pub fn dimension(self) -> usize {
        match self {
            BaseMap::Cat => 2,
            BaseMap::Doubling => 1,
        }
    }

    #[inline]
    pub fn step(self, base: &[f64]) -> Vec<f64> {
        match self {
            BaseMap::Cat => {
                let (a, b) = CatMap::step(base[0], base[1]);
                vec![a, b]
            }
            BaseMap::Doubling => vec![wrap_unit(2.0 * base[0])],
        }
    }
}

/// Roof function: constant or c0 + c1 cos(2 pi x), bounded away from zero.
#[derive(Debug, Clone, Copy)]
pub enum Roof {
    Constant(f64),
    Cosine { c0: f64, c1: f64 },
}

impl Roof {
    #[inline]
    pub fn eval(&self, base: &[f64]) -> f64 {
        match *self {
            Roof::Constant(c) => c,
            Roof::Cosine { c0, c1 } => c0 + c1 * (std::f64::consts::TAU * base[0]).cos(),
        }
    }

    pub fn min_value(&self) -> f64 {
        match *self {
            Roof::Constant(c) => c,
            Roof::Cosine { c0, c1 } => c0 - c1.abs(),
        }
    }

    pub fn max_value(&self) -> f64 {
        match *self {
            Roof::Constant(c) => c,
            Roof::Cosine { c0, c1 } => c0 + c1.abs(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuspensionFlow {
    name: String,
    base: BaseMap,
    roof: Roof,
}

impl SuspensionFlow {
    pub fn new(name: &str, base: BaseMap, roof: Roof) -> Result<Self> {
        if roof.min_value() <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "roof must be bounded away from zero, min is {}",
                roof.min_value()
            )));
        }
        Ok(SuspensionFlow {
            name: name.to_string(),
            base,
            roof,
        })
    }

    pub fn base(&self) -> BaseMap {
        self.base
    }

    pub fn roof(&self) -> &Roof {
        &self.roof
    }

    /// Split a suspension state into (base coords, fiber height).
    pub fn split(&self, x: &PhasePoint) -> Result<(Vec<f64>, f64)> {
        let c = x.as_coords()?;
        let d = self.base.dimension();
        if c.len() != d + 1 || !c.is_finite() {
            return Err(Error::NumericDomain(format!("bad suspension state {c:?}")));
        }
        let s = c.as_slice();
        Ok((s[..d].to_vec(), s[d]))
    }

    fn join(&self, base: &[f64], h: f64) -> PhasePoint {
        let mut v = base.to_vec();
        v.push(h);
        PhasePoint::Coords(CoordVec::new(&v))
    }

    /// Advance and count ceiling crossings during [0, dt].
    pub fn advance_counting(&self, x: &PhasePoint, dt: f64) -> Result<(PhasePoint, u64)> {
        if dt.is_nan() || dt < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "suspension advance needs dt >= 0, got {dt}"
            )));
        }
        let (mut base, mut h) = self.split(x)?;
        let roof_here = self.roof.eval(&base);
        if !(0.0..roof_here).contains(&h) {
            return Err(Error::InvalidArgument(format!(
                "fiber height {h} outside [0, {roof_here})"
            )));
        }
        let mut remaining = dt;
        let mut crossings = 0u64;
        loop {
            let gap = self.roof.eval(&base) - h;
            if remaining < gap {
                return Ok((self.join(&base, h + remaining), crossings));
            }
            remaining -= gap;
            base = self.base.step(&base);
            h = 0.0;
            crossings += 1;
        }
    }
}

impl System for SuspensionFlow {
    fn name(&self) -> &str {
        &self.name
    }
    fn time_kind(&self) -> TimeKind {
        TimeKind::Flow
    }
    fn dimension(&self) -> usize {
        self.base.dimension() + 1
    }
    fn velocity_bound(&self) -> f64 {
        1.0
    }
    fn parameters(&self) -> Vec<(String, f64)> {
        match self.roof {
            Roof::Constant(c) => vec![("roof_c0".into(), c)],
            Roof::Cosine { c0, c1 } => {
                vec![("roof_c0".into(), c0), ("roof_c1".into(), c1)]
            }
        }
    }

    fn advance(&self, x: &PhasePoint, dt: f64) -> Result<PhasePoint> {
        check_dt(TimeKind::Flow, dt)?;
        Ok(self.advance_counting(x, dt)?.0)
    }

    fn sample_invariant(&self, rng: &mut RngStream) -> Result<PhasePoint> {
        // Uniform under the roof graph: (base measure x fiber Lebesgue),
        // normalized by the roof integral.
        let d = self.base.dimension();
        let roof_max = self.roof.max_value();
        for _ in 0..100_000 {
            let base: Vec<f64> = (0..d).map(|_| rng.uniform()).collect();
            let h = rng.uniform_in(0.0, roof_max);
            if h < self.roof.eval(&base) {
                return Ok(self.join(&base, h));
            }
        }
        Err(Error::SamplingFailure {
            attempts: 100_000,
            accepted: 0,
            rate: 0.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn const_cat() -> SuspensionFlow {
        SuspensionFlow::new("susp", BaseMap::Cat, Roof::Constant(1.0)).unwrap()
    }

    #[test]
    fn constant_roof_fixed_point_crossings() {
        // Base fixed point at the origin, roof 1: after dt = 3.5, height
        // is 0.5 and exactly 3 ceilings were crossed.
        let sys = const_cat();
        let x = PhasePoint::coords(&[0.0, 0.0, 0.0]);
        let (y, crossings) = sys.advance_counting(&x, 3.5).unwrap();
        let s = y.as_coords().unwrap().as_slice().to_vec();
        assert_eq!(crossings, 3);
        assert_eq!(s, vec![0.0, 0.0, 0.5]);
    }

    #[test]
    fn short_advance_has_no_crossing() {
        let sys = const_cat();
        let x = PhasePoint::coords(&[0.3, 0.8, 0.2]);
        let (y, crossings) = sys.advance_counting(&x, 0.5).unwrap();
        assert_eq!(crossings, 0);
        let s = y.as_coords().unwrap().as_slice().to_vec();
        assert_eq!(s, vec![0.3, 0.8, 0.7]);
    }

    #[test]
    fn cosine_roof_first_crossing_at_roof_height() {
        // dt exactly equal to the remaining roof: base advances once,
        // height returns to 0, one crossing.
        let roof = Roof::Cosine { c0: 1.0, c1: 0.5 };
        let sys = SuspensionFlow::new("susp", BaseMap::Doubling, roof).unwrap();
        let x0 = 0.3;
        let dt = roof.eval(&[x0]);
        let x = PhasePoint::coords(&[x0, 0.0]);
        let (y, crossings) = sys.advance_counting(&x, dt).unwrap();
        let s = y.as_coords().unwrap().as_slice().to_vec();
        assert_eq!(crossings, 1);
        assert!((s[0] - 0.6).abs() < 1e-15, "base should advance once");
        assert!(s[1].abs() < 1e-12, "height should return to zero");
    }

    #[test]
    fn crossing_times_reconstruct_elapsed_time() {
        // Accumulated roof segments plus the residual height equal dt to
        // machine precision.
        let roof = Roof::Cosine { c0: 1.0, c1: 0.5 };
        let sys = SuspensionFlow::new("susp", BaseMap::Cat, roof).unwrap();
        let x = PhasePoint::coords(&[0.21, 0.47, 0.1]);
        let dt = 37.25;
        let (y, crossings) = sys.advance_counting(&x, dt).unwrap();

        // Replay the same roof evaluations in the same order.
        let (mut base, h0) = sys.split(&x).unwrap();
        let mut elapsed = -h0;
        for _ in 0..crossings {
            elapsed += sys.roof().eval(&base);
            base = sys.base().step(&base);
        }
        let (_, h_end) = sys.split(&y).unwrap();
        elapsed += h_end;
        assert!(
            (elapsed - dt).abs() < 1e-9,
            "reconstructed {elapsed} vs {dt}"
        );
    }

    #[test]
    fn rejects_height_above_roof() {
        let sys = const_cat();
        let x = PhasePoint::coords(&[0.3, 0.8, 1.2]);
        assert!(sys.advance_counting(&x, 0.1).is_err());
    }

    #[test]
    fn rejects_nonpositive_roof() {
        assert!(
            SuspensionFlow::new("susp", BaseMap::Cat, Roof::Cosine { c0: 0.4, c1: 0.5 }).is_err()
        );
    }

    #[test]
    fn sampler_respects_roof_density() {
        // Under (Lebesgue x fiber)/integral(roof), the base marginal has
        // density roof(x)/integral(roof): compare the empirical mean of
        // the base x-coordinate against Simpson quadrature.
        let roof = Roof::Cosine { c0: 1.0, c1: 0.5 };
        let sys = SuspensionFlow::new("susp", BaseMap::Doubling, roof).unwrap();
        let mut rng = RngStream::new(11, 0);
        let n = 100_000;
        let mean_x: f64 = (0..n)
            .map(|_| {
                let s = sys.sample_invariant(&mut rng).unwrap();
                s.as_coords().unwrap().as_slice()[0]
            })
            .sum::<f64>()
            / n as f64;
        // integral of x roof(x) dx / integral of roof(x) dx via Simpson.
        let m = 4000;
        let (mut num, mut den) = (0.0, 0.0);
        let h = 1.0 / m as f64;
        for j in 0..m {
            let x0 = j as f64 * h;
            let f = |x: f64| roof.eval(&[x]);
            let simpson =
                |g: &dyn Fn(f64) -> f64| h / 6.0 * (g(x0) + 4.0 * g(x0 + h / 2.0) + g(x0 + h));
            num += simpson(&|x| x * f(x));
            den += simpson(&f);
        }
        let expect = num / den;
        assert!(
            (mean_x - expect).abs() < 0.005,
            "mean {mean_x} vs quadrature {expect}"
        );
    }
}
