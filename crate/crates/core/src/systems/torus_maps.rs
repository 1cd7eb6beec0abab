//! Hyperbolic toral automorphism and the doubling map: the exponentially
//! mixing discrete-time workhorses.

use crate::dynamics::{check_dt, PhasePoint, System, TimeKind};
use crate::error::{Error, Result};
use crate::geom::torus::wrap_unit;
use crate::rng::RngStream;

/// The area-preserving toral automorphism (x, y) -> (2x + y, x + y) mod 1.
#[derive(Debug, Clone, Copy)]
pub struct CatMap;

impl CatMap {
    #[inline]
    pub fn step(x: f64, y: f64) -> (f64, f64) {
        (wrap_unit(2.0 * x + y), wrap_unit(x + y))
    }

    /// Largest singular value of [[2,1],[1,1]]: the one-step Lipschitz
    /// constant. The matrix is symmetric, so this is the top eigenvalue
    /// (3 + sqrt 5)/2.
    pub fn lipschitz() -> f64 {
        (3.0 + 5.0f64.sqrt()) / 2.0
    }
}

impl System for CatMap {
    fn name(&self) -> &str {
        "cat"
    }
    fn time_kind(&self) -> TimeKind {
        TimeKind::Map
    }
    fn dimension(&self) -> usize {
        2
    }
    fn velocity_bound(&self) -> f64 {
        Self::lipschitz()
    }
    fn parameters(&self) -> Vec<(String, f64)> {
        vec![]
    }

    fn advance(&self, x: &PhasePoint, dt: f64) -> Result<PhasePoint> {
        check_dt(TimeKind::Map, dt)?;
        let c = x.as_coords()?;
        if c.len() != 2 || !c.is_finite() {
            return Err(Error::NumericDomain(format!("bad cat-map state {c:?}")));
        }
        let (mut a, mut b) = (c.as_slice()[0], c.as_slice()[1]);
        for _ in 0..dt as u64 {
            let (na, nb) = Self::step(a, b);
            a = na;
            b = nb;
        }
        Ok(PhasePoint::coords(&[a, b]))
    }

    fn sample_invariant(&self, rng: &mut RngStream) -> Result<PhasePoint> {
        Ok(PhasePoint::coords(&[rng.uniform(), rng.uniform()]))
    }
}

/// x -> 2x mod 1 on the circle.
///
/// Stepped on the rational grid a/Q for a safe prime Q near 2^50 with 2 a
/// primitive root, in exact integer arithmetic: naive f64 doubling drains
/// one mantissa bit per step and collapses every orbit onto the fixed
/// point 0 after ~52 steps. On the grid the orbit has period Q - 1 and
/// equidistributes at every radius down to ~1e-15.
#[derive(Debug, Clone, Copy)]
pub struct DoublingMap;

/// Safe prime (Q - 1)/2 prime, Q = 3 mod 8, so ord_Q(2) = Q - 1.
const DOUBLING_Q: f64 = 1_125_899_906_850_947.0;

impl DoublingMap {
    #[inline]
    pub fn step(x: f64) -> f64 {
        let a = (x * DOUBLING_Q).round();
        let mut next = 2.0 * a;
        if next >= DOUBLING_Q {
            next -= DOUBLING_Q;
        }
        next / DOUBLING_Q
    }

    fn snap(x: f64) -> f64 {
        (x * DOUBLING_Q).floor() / DOUBLING_Q
    }
}

impl System for DoublingMap {
    fn name(&self) -> &str {
        "doubling"
    }
    fn time_kind(&self) -> TimeKind {
        TimeKind::Map
    }
    fn dimension(&self) -> usize {
        1
    }
    fn velocity_bound(&self) -> f64 {
        2.0
    }
    fn parameters(&self) -> Vec<(String, f64)> {
        vec![]
    }

    fn advance(&self, x: &PhasePoint, dt: f64) -> Result<PhasePoint> {
        check_dt(TimeKind::Map, dt)?;
        let c = x.as_coords()?;
        if c.len() != 1 || !c.is_finite() {
            return Err(Error::NumericDomain(format!("bad doubling state {c:?}")));
        }
        let mut v = c.as_slice()[0];
        for _ in 0..dt as u64 {
            v = Self::step(v);
        }
        Ok(PhasePoint::coords(&[v]))
    }

    fn sample_invariant(&self, rng: &mut RngStream) -> Result<PhasePoint> {
        Ok(PhasePoint::coords(&[Self::snap(rng.uniform())]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cat_fixed_point_at_origin() {
        let sys = CatMap;
        let x = PhasePoint::coords(&[0.0, 0.0]);
        let y = sys.advance(&x, 5.0).unwrap();
        assert_eq!(y.as_coords().unwrap().as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn cat_single_step_example() {
        // (1/2, 1/2) -> (2*1/2 + 1/2, 1/2 + 1/2) mod 1 = (1/2, 0).
        let (a, b) = CatMap::step(0.5, 0.5);
        assert_eq!((a, b), (0.5, 0.0));
    }

    #[test]
    fn doubling_step_example() {
        let sys = DoublingMap;
        let y = sys.advance(&PhasePoint::coords(&[0.3]), 1.0).unwrap();
        // Grid snapping costs at most 1/Q ~ 1e-15 per endpoint.
        assert!((y.as_coords().unwrap().as_slice()[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn doubling_orbits_do_not_collapse() {
        // The naive f64 map hits the fixed point 0 after ~52 steps; the
        // grid map must keep equidistributing far beyond that.
        let sys = DoublingMap;
        let mut rng = RngStream::new(51, 0);
        let x0 = sys.sample_invariant(&mut rng).unwrap();
        let far = sys.advance(&x0, 5000.0).unwrap();
        let v = far.as_coords().unwrap().as_slice()[0];
        assert!(v != 0.0, "orbit collapsed to the fixed point");
        // And a window of the late orbit still has ~Lebesgue statistics.
        let mut x = far;
        let mut low = 0u32;
        for _ in 0..2000 {
            x = sys.advance(&x, 1.0).unwrap();
            if x.as_coords().unwrap().as_slice()[0] < 0.5 {
                low += 1;
            }
        }
        let frac = low as f64 / 2000.0;
        assert!((frac - 0.5).abs() < 0.06, "late-orbit box fraction {frac}");
    }

    #[test]
    fn zero_steps_is_identity() {
        let sys = CatMap;
        let x = PhasePoint::coords(&[0.37, 0.82]);
        let y = sys.advance(&x, 0.0).unwrap();
        assert_eq!(
            x.as_coords().unwrap().as_slice(),
            y.as_coords().unwrap().as_slice()
        );
    }

    #[test]
    fn fractional_steps_are_rejected() {
        let sys = CatMap;
        let x = PhasePoint::coords(&[0.1, 0.2]);
        assert!(matches!(
            sys.advance(&x, 1.5),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn cat_preserves_lebesgue_on_boxes() {
        // Empirical measure of a box equals that of its 3-step preimage
        // within 3 binomial standard errors.
        let sys = CatMap;
        let mut rng = RngStream::new(404, 0);
        let n = 50_000;
        let in_box = |p: &PhasePoint| {
            let s = p.as_coords().unwrap().as_slice().to_vec();
            s[0] < 0.5 && s[1] < 0.5
        };
        let mut direct = 0u32;
        let mut pulled_back = 0u32;
        for _ in 0..n {
            let x = sys.sample_invariant(&mut rng).unwrap();
            if in_box(&x) {
                direct += 1;
            }
            if in_box(&sys.advance(&x, 3.0).unwrap()) {
                pulled_back += 1;
            }
        }
        let p = 0.25f64;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let d = direct as f64 / n as f64;
        let pb = pulled_back as f64 / n as f64;
        assert!((d - p).abs() < 3.0 * sigma, "direct {d}");
        assert!((pb - p).abs() < 3.0 * sigma, "pulled back {pb}");
    }

    #[test]
    fn doubling_samples_have_lebesgue_mean() {
        let sys = DoublingMap;
        let mut rng = RngStream::new(405, 0);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| {
                sys.sample_invariant(&mut rng)
                    .unwrap()
                    .as_coords()
                    .unwrap()
                    .as_slice()[0]
            })
            .sum::<f64>()
            / n as f64;
        let tol = 3.0 * (1.0 / (12.0 * n as f64)).sqrt();
        assert!((mean - 0.5).abs() < tol, "mean {mean}");
    }
}
