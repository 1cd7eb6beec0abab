//! Flat-torus coordinate arithmetic.

use crate::scalar::Real;

/// Reduce to [0, 1). Applied after every map/flow step so coordinates
/// never drift out of the fundamental cell.
#[inline]
pub fn wrap_unit<S: Real>(x: S) -> S {
    let f = x - x.floor();
    // x.floor() can round such that f == 1.0 for tiny negative x.
    if f >= S::one() {
        f - S::one()
    } else {
        f
    }
}

/// Distance on the circle R/Z.
#[inline]
pub fn circle_dist<S: Real>(a: S, b: S) -> S {
    let d = (a - b).abs();
    let w = d - d.floor();
    w.min(S::one() - w)
}

/// Euclidean distance on the n-torus with wraparound per coordinate.
#[inline]
pub fn torus_dist<S: Real>(a: &[S], b: &[S]) -> S {
    let mut s = S::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        let d = circle_dist(*x, *y);
        s += d * d;
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_stays_in_unit_interval() {
        for &x in &[-2.5, -1.0, -1e-17, 0.0, 0.3, 0.999999, 1.0, 7.25] {
            let w = wrap_unit(x);
            assert!((0.0..1.0).contains(&w), "wrap({x}) = {w}");
        }
    }

    #[test]
    fn circle_distance_wraps() {
        assert!((circle_dist(0.9f64, 0.1) - 0.2).abs() < 1e-15);
        assert!((circle_dist(0.1f64, 0.9) - 0.2).abs() < 1e-15);
        assert!(circle_dist(0.5f64, 0.5) == 0.0);
        // Max possible circle distance is 1/2.
        assert!((circle_dist(0.0f64, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn torus_distance_is_componentwise_euclidean() {
        let a = [0.95, 0.1];
        let b = [0.05, 0.2];
        let expect = (0.1f64 * 0.1 + 0.1 * 0.1).sqrt();
        assert!((torus_dist(&a, &b) - expect).abs() < 1e-15);
    }
}
