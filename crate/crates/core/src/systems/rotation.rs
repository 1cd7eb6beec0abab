//! Circle rotations: the sharp arithmetic boundary of the hitting-time
//! law. Golden rotations satisfy the equality without any mixing;
//! Liouville rotations break it.

use crate::dynamics::{check_dt, PhasePoint, System, TimeKind};
use crate::error::{Error, Result};
use crate::geom::torus::wrap_unit;
use crate::rng::RngStream;
use crate::systems::continued_fraction::{liouville_terms, Convergents};

/// Arithmetic class of the rotation number.
#[derive(Debug, Clone)]
pub enum RotationClass {
    /// alpha = (sqrt 5 - 1)/2, the badly approximable extreme.
    Golden,
    /// alpha with partial quotients k^k, truncated once the convergent
    /// denominator passes 1e12. Stored as an exact rational p/q and
    /// stepped in integer numerator arithmetic, so the Diophantine fine
    /// structure survives billions of steps (f64 orbit rounding would
    /// destroy it at the 1e-13 scale after ~1e5 steps).
    Liouville,
    /// Arbitrary rotation number in (0, 1).
    Custom(f64),
}

#[derive(Debug, Clone)]
pub struct Rotation {
    class: RotationClass,
    alpha: f64,
    /// Liouville only: exact numerator/denominator and convergents.
    rational: Option<(u64, u64)>,
    convergents: Option<Convergents>,
}

impl Rotation {
    pub fn golden() -> Self {
        Rotation {
            class: RotationClass::Golden,
            alpha: (5.0f64.sqrt() - 1.0) / 2.0,
            rational: None,
            convergents: None,
        }
    }

    pub fn liouville() -> Self {
        let conv = Convergents::from_terms(&liouville_terms(1_000_000_000_000));
        let k = conv.depth() - 1;
        let (p, q) = (conv.p[k] as u64, conv.q[k] as u64);
        Rotation {
            class: RotationClass::Liouville,
            alpha: p as f64 / q as f64,
            rational: Some((p, q)),
            convergents: Some(conv),
        }
    }

    pub fn custom(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "rotation number must lie in (0,1), got {alpha}"
            )));
        }
        Ok(Rotation {
            class: RotationClass::Custom(alpha),
            alpha,
            rational: None,
            convergents: None,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn class(&self) -> &RotationClass {
        &self.class
    }

    /// Exact rotation rational (Liouville class only).
    pub fn rational(&self) -> Option<(u64, u64)> {
        self.rational
    }

    pub fn convergents(&self) -> Option<&Convergents> {
        self.convergents.as_ref()
    }

    #[inline]
    pub fn step(&self, x: f64) -> f64 {
        match self.rational {
            // Integer numerator arithmetic: x = a/q exactly.
            Some((p, q)) => {
                let a = (x * q as f64).round();
                let mut next = a + p as f64;
                let qf = q as f64;
                if next >= qf {
                    next -= qf;
                }
                next / qf
            }
            None => wrap_unit(x + self.alpha),
        }
    }

    /// Snap a point onto the exact orbit grid (Liouville class).
    fn snap(&self, x: f64) -> f64 {
        match self.rational {
            Some((_, q)) => (x * q as f64).floor() / q as f64,
            None => x,
        }
    }

    fn class_tag(&self) -> f64 {
        match self.class {
            RotationClass::Golden => 0.0,
            RotationClass::Liouville => 1.0,
            RotationClass::Custom(_) => 2.0,
        }
    }
}

impl System for Rotation {
    fn name(&self) -> &str {
        match self.class {
            RotationClass::Golden => "rotation-golden",
            RotationClass::Liouville => "rotation-liouville",
            RotationClass::Custom(_) => "rotation-custom",
        }
    }
    fn time_kind(&self) -> TimeKind {
        TimeKind::Map
    }
    fn dimension(&self) -> usize {
        1
    }
    fn velocity_bound(&self) -> f64 {
        1.0
    }
    fn parameters(&self) -> Vec<(String, f64)> {
        vec![
            ("alpha".into(), self.alpha),
            ("class".into(), self.class_tag()),
        ]
    }

    fn advance(&self, x: &PhasePoint, dt: f64) -> Result<PhasePoint> {
        check_dt(TimeKind::Map, dt)?;
        let c = x.as_coords()?;
        if c.len() != 1 || !c.is_finite() {
            return Err(Error::NumericDomain(format!("bad rotation state {c:?}")));
        }
        let v = c.as_slice()[0];
        let out = match self.rational {
            Some((p, q)) => {
                // n steps at once, exactly: a + n p mod q.
                let n = dt as u128;
                let a = (v * q as f64).round() as u128;
                let next = (a + n * p as u128) % q as u128;
                next as f64 / q as f64
            }
            None => wrap_unit(v + dt * self.alpha),
        };
        Ok(PhasePoint::coords(&[out]))
    }

    fn sample_invariant(&self, rng: &mut RngStream) -> Result<PhasePoint> {
        Ok(PhasePoint::coords(&[self.snap(rng.uniform())]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::torus::circle_dist;

    #[test]
    fn quarter_rotation_example() {
        let rot = Rotation::custom(0.25).unwrap();
        let y = rot.advance(&PhasePoint::coords(&[0.9]), 1.0).unwrap();
        assert!((y.as_coords().unwrap().as_slice()[0] - 0.15).abs() < 1e-12);
    }

    #[test]
    fn golden_alpha_is_full_precision() {
        let rot = Rotation::golden();
        assert_eq!(rot.alpha(), (5.0f64.sqrt() - 1.0) / 2.0);
    }

    #[test]
    fn rotation_is_an_isometry() {
        let rot = Rotation::golden();
        let mut rng = RngStream::new(7, 0);
        for _ in 0..100 {
            let a = rng.uniform();
            let b = rng.uniform();
            let d0 = circle_dist(a, b);
            let d1 = circle_dist(rot.step(a), rot.step(b));
            assert!((d0 - d1).abs() < 1e-15);
        }
    }

    #[test]
    fn liouville_steps_are_exact_integer_arithmetic() {
        let rot = Rotation::liouville();
        let (p, q) = rot.rational().unwrap();
        // One step from the grid point a/q lands exactly on (a+p) mod q.
        let a = 123_456_789_u64 % q;
        let x = a as f64 / q as f64;
        let y = rot.step(x);
        let expect = ((a + p) % q) as f64 / q as f64;
        assert_eq!(y, expect);
        // Orbit reconstruction over many steps stays on the grid.
        let z = rot.advance(&PhasePoint::coords(&[x]), 1_000_000.0).unwrap();
        let a_end = (z.as_coords().unwrap().as_slice()[0] * q as f64).round() as u128;
        let expect_end = (a as u128 + 1_000_000u128 * p as u128) % q as u128;
        assert_eq!(a_end, expect_end);
    }

    #[test]
    fn liouville_advance_matches_iterated_steps() {
        let rot = Rotation::liouville();
        let x0 = rot.snap(0.371);
        let mut x = x0;
        for _ in 0..1000 {
            x = rot.step(x);
        }
        let y = rot.advance(&PhasePoint::coords(&[x0]), 1000.0).unwrap();
        assert_eq!(x, y.as_coords().unwrap().as_slice()[0]);
    }

    #[test]
    fn custom_rejects_bad_alpha() {
        assert!(Rotation::custom(0.0).is_err());
        assert!(Rotation::custom(1.0).is_err());
        assert!(Rotation::custom(-0.3).is_err());
    }
}
