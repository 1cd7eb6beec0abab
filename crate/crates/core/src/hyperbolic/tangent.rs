//! The unit tangent bundle of the hyperbolic plane as PSL(2, R).

use num_complex::Complex64;

use crate::geom::mobius::Mobius;

/// A unit tangent vector on the hyperbolic plane, stored as the group
/// element g with g.(i, up) = (z, theta), plus the cached projection.
///
/// The cache is recomputed from the matrix by every constructor, so it is
/// consistent by construction.
#[derive(Debug, Clone, Copy)]
pub struct UnitTangent {
    g: Mobius<f64>,
    z: Complex64,
    theta: f64,
}

impl UnitTangent {
    /// Wrap a group element, computing the projection.
    pub fn from_group(g: Mobius<f64>) -> Self {
        let (z, theta) = project(&g);
        UnitTangent { g, z, theta }
    }

    /// The tangent vector at base point `z` pointing in direction `theta`
    /// (Euclidean angle; pi/2 is straight up).
    pub fn from_position(z: Complex64, theta: f64) -> Self {
        let y_sqrt = z.im.sqrt();
        let place = Mobius::new(y_sqrt, z.re / y_sqrt, 0.0, 1.0 / y_sqrt);
        let turn = Mobius::rotation_about_i(0.5 * (theta - std::f64::consts::FRAC_PI_2));
        Self::from_group(place * turn)
    }

    /// Unit tangent at i pointing straight up (the group identity).
    pub fn base() -> Self {
        Self::from_group(Mobius::identity())
    }

    pub fn group(&self) -> &Mobius<f64> {
        &self.g
    }

    /// Base point in the upper half-plane.
    pub fn point(&self) -> Complex64 {
        self.z
    }

    /// Direction at the base point, in [0, 2*pi).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_finite(&self) -> bool {
        self.z.re.is_finite() && self.z.im.is_finite() && self.z.im > 0.0 && self.theta.is_finite()
    }

    /// Move the tangent vector left by an isometry: u -> gamma . u.
    pub fn translate(&self, gamma: &Mobius<f64>) -> Self {
        Self::from_group(*gamma * self.g)
    }

    /// Exact geodesic flow for time t (negative allowed); unit speed in the
    /// base point.
    pub fn advance(&self, t: f64) -> Self {
        Self::from_group(self.g * Mobius::flow(t))
    }
}

/// Recover (base point, direction) from the group element.
fn project(g: &Mobius<f64>) -> (Complex64, f64) {
    let i = Complex64::new(0.0, 1.0);
    let z = g.apply(i);
    // Pushforward of the upward tangent i at i: arg(g'(i) * i) with
    // g'(i) = (c i + d)^{-2}.
    let theta = std::f64::consts::FRAC_PI_2 - 2.0 * g.c.atan2(g.d);
    (z, wrap_angle(theta))
}

/// Wrap an angle into [0, 2*pi).
pub fn wrap_angle(t: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let w = t.rem_euclid(tau);
    if w >= tau {
        w - tau
    } else {
        w
    }
}

/// Signed angular difference wrapped into (-pi, pi].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut d = (a - b).rem_euclid(tau);
    if d > std::f64::consts::PI {
        d -= tau;
    }
    d
}

/// The geodesic flow as a free function (mirrors `UnitTangent::advance`).
pub fn geodesic_advance(u: &UnitTangent, t: f64) -> UnitTangent {
    u.advance(t)
}
