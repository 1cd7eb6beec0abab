//! Real Möbius transformations acting on the upper half-plane.

use num_complex::Complex;
use std::ops::Mul;

use crate::scalar::Real;

/// Element of PSL(2, R) stored as a unimodular 2x2 real matrix
/// [[a, b], [c, d]], identified with its negation.
///
/// Products renormalize the determinant to 1 so long words stay unimodular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Real> Mobius<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Mobius { a, b, c, d }.normalized()
    }

    pub fn identity() -> Self {
        Mobius {
            a: S::one(),
            b: S::zero(),
            c: S::zero(),
            d: S::one(),
        }
    }

    /// z -> z + t.
    pub fn translation(t: S) -> Self {
        Mobius {
            a: S::one(),
            b: t,
            c: S::zero(),
            d: S::one(),
        }
    }

    /// z -> e^{2s} z, the hyperbolic translation by 2s along the imaginary
    /// axis (geodesic from 0 to infinity).
    pub fn axis_translation(s: S) -> Self {
        Mobius {
            a: s.exp(),
            b: S::zero(),
            c: S::zero(),
            d: (-s).exp(),
        }
    }

    /// Elliptic element fixing i; rotates tangent vectors at i by 2*psi.
    pub fn rotation_about_i(psi: S) -> Self {
        Mobius {
            a: psi.cos(),
            b: psi.sin(),
            c: -psi.sin(),
            d: psi.cos(),
        }
    }

    /// The geodesic-flow generator: g -> g * diag(e^{t/2}, e^{-t/2}) moves
    /// the tangent vector time t along its geodesic.
    pub fn flow(t: S) -> Self {
        let two = S::one() + S::one();
        Self::axis_translation(t / two)
    }

    pub fn det(&self) -> S {
        self.a * self.d - self.b * self.c
    }

    /// Rescale so det = 1 (requires det > 0, which holds for all products
    /// of orientation-preserving isometries).
    pub fn normalized(self) -> Self {
        let det = self.det();
        let k = det.sqrt().recip();
        Mobius {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
            d: self.d * k,
        }
    }

    pub fn inverse(&self) -> Self {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .normalized()
    }

    /// Apply to a point of the upper half-plane.
    pub fn apply(&self, z: Complex<S>) -> Complex<S> {
        let num = Complex::new(self.a, S::zero()) * z + Complex::new(self.b, S::zero());
        let den = Complex::new(self.c, S::zero()) * z + Complex::new(self.d, S::zero());
        num / den
    }

    /// Derivative dg/dz at z; |g'(z)| rotates/contracts tangent vectors.
    pub fn derivative(&self, z: Complex<S>) -> Complex<S> {
        let den = Complex::new(self.c, S::zero()) * z + Complex::new(self.d, S::zero());
        (den * den).finv()
    }

    /// Max-norm distance to another element up to projective sign.
    pub fn projective_dist(&self, other: &Self) -> S {
        let d1 = (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs());
        let d2 = (self.a + other.a)
            .abs()
            .max((self.b + other.b).abs())
            .max((self.c + other.c).abs())
            .max((self.d + other.d).abs());
        d1.min(d2)
    }

    pub fn is_identity(&self, tol: S) -> bool {
        self.projective_dist(&Self::identity()) <= tol
    }
}

impl<S: Real> Mul for Mobius<S> {
    type Output = Mobius<S>;

    fn mul(self, rhs: Self) -> Self::Output {
        Mobius {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
        .normalized()
    }
}
