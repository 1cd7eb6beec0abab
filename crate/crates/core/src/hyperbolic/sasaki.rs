//! Surrogate for the Sasaki metric on the unit tangent bundle.
//!
//! sqrt(base distance^2 + comparison angle^2), where the comparison angle
//! is measured after parallel transport along the connecting geodesic.
//! This is bi-Lipschitz equivalent to the Sasaki distance at small scales,
//! so log-log exponents measured with it are the Sasaki exponents.

use num_complex::Complex64;

use crate::geom::uhp;
use crate::hyperbolic::tangent::{angle_diff, UnitTangent};

/// Angle at z of the geodesic from z to w (Euclidean tangent direction),
/// and the corresponding outgoing angle at w.
fn connecting_angles(z: Complex64, w: Complex64) -> (f64, f64) {
    let dx = w.re - z.re;
    if dx.abs() < 1e-14 * (1.0 + z.re.abs().max(w.re.abs())) {
        // Vertical geodesic.
        let up = w.im > z.im;
        let a = if up {
            std::f64::consts::FRAC_PI_2
        } else {
            -std::f64::consts::FRAC_PI_2
        };
        return (a, a);
    }
    // Semicircle orthogonal to the real axis through z and w.
    let c = (z.norm_sqr() - w.norm_sqr()) / (2.0 * (z.re - w.re));
    let vz = Complex64::new(0.0, 1.0) * (z - Complex64::new(c, 0.0));
    let vw = Complex64::new(0.0, 1.0) * (w - Complex64::new(c, 0.0));
    // Orient along increasing circle parameter from z to w.
    let az = (z - Complex64::new(c, 0.0)).arg();
    let aw = (w - Complex64::new(c, 0.0)).arg();
    if aw > az {
        (vz.arg(), vw.arg())
    } else {
        ((-vz).arg(), (-vw).arg())
    }
}

/// Comparison angle between v's direction and u's direction parallel-
/// transported along the geodesic from u's base point to v's.
pub fn transport_angle(u: &UnitTangent, v: &UnitTangent) -> f64 {
    let z = u.point();
    let w = v.point();
    if (z - w).norm() < 1e-14 * (1.0 + z.im) {
        return angle_diff(v.theta(), u.theta()).abs();
    }
    let (phi_z, phi_w) = connecting_angles(z, w);
    // Transport preserves the angle to the connecting geodesic.
    let transported = phi_w + angle_diff(u.theta(), phi_z);
    angle_diff(v.theta(), transported).abs()
}

/// The surrogate Sasaki distance.
pub fn sasaki_distance(u: &UnitTangent, v: &UnitTangent) -> f64 {
    let d = uhp::distance_unchecked(u.point(), v.point());
    let a = transport_angle(u, v);
    (d * d + a * a).sqrt()
}
