//! Upper half-plane model of the hyperbolic plane.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// cosh of the hyperbolic distance between two points of the upper
/// half-plane: cosh d = 1 + |z - w|^2 / (2 Im z Im w).
///
/// Cheaper than `distance` and monotone in it; the scan kernels work with
/// cosh values directly.
#[inline]
pub fn cosh_distance<S: Real>(z: Complex<S>, w: Complex<S>) -> S {
    let two = S::one() + S::one();
    S::one() + (z - w).norm_sqr() / (two * z.im * w.im)
}

/// Hyperbolic distance on the upper half-plane.
///
/// Errors when either point has non-positive imaginary part.
pub fn distance<S: Real>(z: Complex<S>, w: Complex<S>) -> Result<S> {
    if !(z.im > S::zero() && w.im > S::zero()) {
        return Err(Error::InvalidArgument(format!(
            "hyperbolic distance needs Im > 0, got Im z = {:?}, Im w = {:?}",
            z.im, w.im
        )));
    }
    Ok(acosh(cosh_distance(z, w)))
}

/// Distance for points known to be valid (internal hot paths).
#[inline]
pub fn distance_unchecked<S: Real>(z: Complex<S>, w: Complex<S>) -> S {
    acosh(cosh_distance(z, w))
}

/// Inverse hyperbolic cosine, clamped so values like 1 - 1e-17 coming from
/// round-off do not produce NaN.
#[inline]
pub fn acosh<S: Real>(x: S) -> S {
    if x <= S::one() {
        S::zero()
    } else {
        (x + (x * x - S::one()).sqrt()).ln()
    }
}

/// Map a point of the unit disk to the upper half-plane
/// (Cayley transform, disk origin -> i).
pub fn disk_to_uhp<S: Real>(w: Complex<S>) -> Complex<S> {
    let one = Complex::new(S::one(), S::zero());
    let i = Complex::new(S::zero(), S::one());
    i * (one + w) / (one - w)
}

/// Inverse Cayley transform: upper half-plane to unit disk, i -> 0.
pub fn uhp_to_disk<S: Real>(z: Complex<S>) -> Complex<S> {
    let i = Complex::new(S::zero(), S::one());
    (z - i) / (z + i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::mobius::Mobius;
    use num_complex::Complex64;

    #[test]
    fn distance_to_self_is_zero() {
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(distance(i, i).unwrap(), 0.0);
    }

    #[test]
    fn vertical_distance_is_log_ratio() {
        // d(i, 2i) = ln 2, the integral of dy/y from 1 to 2.
        let d = distance(Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0)).unwrap();
        assert!((d - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn symmetric_nonnegative() {
        let z = Complex64::new(0.3, 0.8);
        let w = Complex64::new(-1.2, 2.5);
        let d1 = distance(z, w).unwrap();
        let d2 = distance(w, z).unwrap();
        assert!(d1 > 0.0);
        assert!((d1 - d2).abs() < 1e-14);
    }

    #[test]
    fn invariant_under_mobius() {
        let mut seed = 0x1234_5678_u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let z = Complex64::new(next() * 4.0 - 2.0, next() * 3.0 + 0.1);
            let w = Complex64::new(next() * 4.0 - 2.0, next() * 3.0 + 0.1);
            let g = Mobius::new(next() + 0.5, next() * 2.0 - 1.0, next() * 0.5, next() + 0.5);
            let d = distance(z, w).unwrap();
            let dg = distance(g.apply(z), g.apply(w)).unwrap();
            assert!((d - dg).abs() < 1e-9, "isometry violated: {d} vs {dg}");
        }
    }

    #[test]
    fn triangle_inequality_sampled() {
        let pts = [
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 0.5),
            Complex64::new(-0.7, 2.0),
            Complex64::new(0.2, 0.1),
        ];
        for a in pts {
            for b in pts {
                for c in pts {
                    let ab = distance(a, b).unwrap();
                    let bc = distance(b, c).unwrap();
                    let ac = distance(a, c).unwrap();
                    assert!(ac <= ab + bc + 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_lower_half_plane() {
        assert!(distance(Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn cayley_round_trip() {
        let z = Complex64::new(0.4, 1.9);
        let back = disk_to_uhp(uhp_to_disk(z));
        assert!((z - back).norm() < 1e-12);
        assert!((uhp_to_disk(Complex64::new(0.0, 1.0))).norm() < 1e-15);
    }
}
