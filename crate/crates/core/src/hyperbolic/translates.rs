//! Group translates of a target point, for correct ball detection near
//! fundamental-domain boundaries.
//!
//! For a reduced orbit point z and a target center p on the quotient, the
//! quotient distance is min over the group of d(z, gamma p). Only finitely
//! many translates can come within the scan's working radius of the
//! domain, so they are enumerated once per experiment and shared.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::mobius::Mobius;
use crate::geom::uhp;
use crate::hyperbolic::domain::{DomainVariant, FuchsianDomain};
use crate::hyperbolic::tangent::{wrap_angle, UnitTangent};

/// One translate gamma . (p, theta_p).
#[derive(Debug, Clone, Copy)]
pub struct Translate {
    pub point: Complex64,
    pub theta: f64,
}

/// Cached list of all translates of the target that can come within
/// `coverage` of the working part of the fundamental domain.
#[derive(Debug, Clone)]
pub struct TranslateCache {
    center: UnitTangent,
    coverage: f64,
    translates: Vec<Translate>,
    /// Domain reference point and the translate distances to it
    /// (ascending, aligned with `translates`): supports the annulus
    /// pre-filter d(z, gamma p) >= |d(z, ref) - d(gamma p, ref)|.
    z_ref: Complex64,
    ref_distances: Vec<f64>,
}

impl TranslateCache {
    /// Build the cache for target tangent `p` (base point must lie in the
    /// domain). `coverage` is the largest distance at which callers need
    /// cached minima to be exact: at least target radius plus the longest
    /// scan window.
    pub fn build(dom: &FuchsianDomain, p: &UnitTangent, coverage: f64) -> Result<Self> {
        if !dom.contains(p.point()) {
            return Err(Error::InvalidArgument(
                "target center must lie inside the fundamental domain".into(),
            ));
        }
        let z_ref = dom.center();

        // Any translate within `coverage` of a working-domain point is
        // within keep_radius of the reference point.
        let keep_radius = coverage + working_domain_radius(dom, p, coverage);

        let mut elements: Vec<Mobius<f64>> = vec![Mobius::identity()];
        let mut frontier: Vec<Mobius<f64>> = elements.clone();
        let mut translates: Vec<Translate> = vec![to_translate(&Mobius::identity(), p)];

        // Breadth-first over words; prune elements that have moved the
        // reference point far beyond the keep radius (generator step length
        // of slack keeps the search complete for Dirichlet generators).
        let step_len = dom
            .generators()
            .iter()
            .map(|g| uhp::distance_unchecked(g.apply(z_ref), z_ref))
            .fold(0.0f64, f64::max);
        let prune_radius = keep_radius + step_len + 1.0;

        let mut stale_levels = 0;
        for _depth in 0..32 {
            let mut next = Vec::new();
            let mut grew = false;
            for gamma in &frontier {
                for g in dom.generators() {
                    let cand = *g * *gamma;
                    if uhp::distance_unchecked(cand.apply(z_ref), z_ref) > prune_radius {
                        continue;
                    }
                    if elements.iter().any(|e| e.projective_dist(&cand) < 1e-9) {
                        continue;
                    }
                    elements.push(cand);
                    next.push(cand);
                    let tp = to_translate(&cand, p);
                    if uhp::distance_unchecked(tp.point, z_ref) <= keep_radius {
                        translates.push(tp);
                        grew = true;
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            stale_levels = if grew { 0 } else { stale_levels + 1 };
            if stale_levels >= 2 {
                break;
            }
            frontier = next;
        }

        // Near translates first: scans prune on the current minimum, so a
        // good first candidate skips most of the list.
        translates.sort_by(|a, b| {
            uhp::cosh_distance(a.point, z_ref)
                .partial_cmp(&uhp::cosh_distance(b.point, z_ref))
                .unwrap()
        });
        let ref_distances = translates
            .iter()
            .map(|t| uhp::distance_unchecked(t.point, z_ref))
            .collect();

        Ok(TranslateCache {
            center: *p,
            coverage,
            translates,
            z_ref,
            ref_distances,
        })
    }

    pub fn center(&self) -> &UnitTangent {
        &self.center
    }

    /// Largest distance at which `min_cosh_distance` is guaranteed exact
    /// for reduced query points.
    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    pub fn translates(&self) -> &[Translate] {
        &self.translates
    }

    pub fn len(&self) -> usize {
        self.translates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.translates.is_empty()
    }

    /// cosh of the quotient distance from a reduced point to the target
    /// base point (exact whenever the true distance is within coverage).
    #[inline]
    pub fn min_cosh_distance(&self, z: Complex64) -> f64 {
        self.translates
            .iter()
            .map(|t| uhp::cosh_distance(z, t.point))
            .fold(f64::INFINITY, f64::min)
    }

    /// Quotient distance from a reduced point to the target base point.
    #[inline]
    pub fn min_distance(&self, z: Complex64) -> f64 {
        uhp::acosh(self.min_cosh_distance(z))
    }

    /// Indices of translates that can possibly lie within `radius` of any
    /// point at distance `dz_ref` from the reference point (triangle
    /// inequality annulus on the precomputed reference distances).
    #[inline]
    pub fn annulus(&self, dz_ref: f64, radius: f64) -> std::ops::Range<usize> {
        let lo = self.ref_distances.partition_point(|&d| d < dz_ref - radius);
        let hi = self
            .ref_distances
            .partition_point(|&d| d <= dz_ref + radius);
        lo..hi
    }

    pub fn z_ref(&self) -> Complex64 {
        self.z_ref
    }
}

fn to_translate(gamma: &Mobius<f64>, p: &UnitTangent) -> Translate {
    let z = p.point();
    let point = gamma.apply(z);
    let dg = gamma.derivative(z);
    Translate {
        point,
        theta: wrap_angle(p.theta() + dg.arg()),
    }
}

/// Radius around the domain's reference point that bounds every orbit
/// location from which a cached minimum may be requested.
fn working_domain_radius(dom: &FuchsianDomain, p: &UnitTangent, coverage: f64) -> f64 {
    match dom.variant() {
        // Compact: the whole domain is within the circumradius
        // R = acosh(cot^2(pi/8)) of the center.
        DomainVariant::Bolza => {
            let cot = std::f64::consts::FRAC_PI_8.tan().recip();
            uhp::acosh(cot * cot) + 0.05
        }
        // Non-compact: above Im = Im(p) e^{coverage} every translate is
        // farther than `coverage` (translates of p never climb above
        // Im(p)), so only the truncated domain matters.
        DomainVariant::Modular => {
            let y_cap = p.point().im * coverage.exp() + 0.5;
            let z_ref = dom.center();
            let corners = [
                Complex64::new(0.5, (3.0f64).sqrt() / 2.0),
                Complex64::new(-0.5, (3.0f64).sqrt() / 2.0),
                Complex64::new(0.5, y_cap),
                Complex64::new(-0.5, y_cap),
                Complex64::new(0.0, y_cap),
            ];
            corners
                .iter()
                .map(|&c| uhp::distance_unchecked(c, z_ref))
                .fold(0.0f64, f64::max)
                + 0.05
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn identity_translate_is_first() {
        let dom = FuchsianDomain::bolza();
        let p = UnitTangent::from_position(Complex64::new(0.15, 1.2), 0.3);
        let cache = TranslateCache::build(&dom, &p, 1.0).unwrap();
        assert!((cache.translates()[0].point - p.point()).norm() < 1e-12);
        assert!(
            cache.len() > 8,
            "expected nontrivial cache, got {}",
            cache.len()
        );
    }

    #[test]
    fn rejects_center_outside_domain() {
        let dom = FuchsianDomain::bolza();
        let p = UnitTangent::from_position(Complex64::new(0.0, 40.0), 0.0);
        assert!(TranslateCache::build(&dom, &p, 1.0).is_err());
    }

    /// Densification oracle: a cache built with a larger coverage must give
    /// the same minimum whenever the smaller cache reports a distance
    /// within its own coverage.
    #[test]
    fn densification_oracle() {
        let mut r = RngStream::new(5150, 0);
        for dom in [FuchsianDomain::bolza(), FuchsianDomain::modular()] {
            let p = match dom.variant() {
                DomainVariant::Bolza => UnitTangent::from_position(Complex64::new(0.15, 1.2), 0.0),
                DomainVariant::Modular => UnitTangent::from_position(Complex64::new(0.0, 2.0), 0.0),
            };
            let small = TranslateCache::build(&dom, &p, 0.8).unwrap();
            let big = TranslateCache::build(&dom, &p, 1.6).unwrap();
            assert!(big.len() >= small.len());
            for _ in 0..500 {
                let z = Complex64::new(r.uniform_in(-3.0, 3.0), r.uniform_in(0.1, 4.0));
                let u = UnitTangent::from_position(z, 0.0);
                let (v, _) = dom.reduce(&u).unwrap();
                let d_small = small.min_distance(v.point());
                let d_big = big.min_distance(v.point());
                assert!(d_big <= d_small + 1e-12);
                if d_small <= small.coverage() {
                    assert!(
                        (d_small - d_big).abs() < 1e-9,
                        "cache with coverage {} missed a translate: {} vs {}",
                        small.coverage(),
                        d_small,
                        d_big
                    );
                }
            }
        }
    }

    #[test]
    fn min_distance_is_a_quotient_metric_bound() {
        // Distances never exceed the in-domain distance to the base center.
        let dom = FuchsianDomain::bolza();
        let p = UnitTangent::from_position(dom.center(), 0.0);
        let cache = TranslateCache::build(&dom, &p, 1.0).unwrap();
        let z = Complex64::new(0.3, 1.4);
        assert!(cache.min_distance(z) <= uhp::distance_unchecked(z, dom.center()) + 1e-12);
    }
}
