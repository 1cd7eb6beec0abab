//! Fuchsian fundamental domains: the modular surface and the Bolza surface.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::mobius::Mobius;
use crate::geom::uhp;
use crate::hyperbolic::tangent::UnitTangent;

/// Which quotient surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainVariant {
    /// H^2 / PSL(2, Z): finite volume pi/3, non-compact (one cusp).
    Modular,
    /// Genus-2 compact surface from the regular octagon with vertex angle
    /// pi/4; area 4*pi by Gauss-Bonnet.
    Bolza,
}

/// Membership slack: a point within this hyperbolic distance of the
/// boundary counts as inside, so reduction terminates cleanly on edges.
const MEMBER_TOL: f64 = 1e-12;

/// How many generator applications reduction may use before giving up.
const WORD_CAP: usize = 256;

/// A fundamental domain with its side-pairing generators and a reduction
/// algorithm mapping any point of H^2 into the domain.
#[derive(Debug, Clone)]
pub struct FuchsianDomain {
    variant: DomainVariant,
    generators: Vec<Mobius<f64>>,
    /// generators[inverse_index[k]] = generators[k]^{-1}.
    inverse_index: Vec<usize>,
    /// Bolza only: neighbor centers g_k(i) for the Dirichlet membership test.
    neighbors: Vec<Complex64>,
    area: f64,
}

impl FuchsianDomain {
    /// The modular surface. Generators: T: z -> z+1, T^{-1}, S: z -> -1/z.
    pub fn modular() -> Self {
        let t = Mobius::translation(1.0);
        let t_inv = Mobius::translation(-1.0);
        let s = Mobius::new(0.0, -1.0, 1.0, 0.0);
        FuchsianDomain {
            variant: DomainVariant::Modular,
            generators: vec![t, t_inv, s],
            inverse_index: vec![1, 0, 2],
            neighbors: Vec::new(),
            area: std::f64::consts::PI / 3.0,
        }
    }

    /// The Bolza surface.
    ///
    /// Derived from octagon trigonometry, not transcribed constants: the
    /// right triangle (center, side midpoint, vertex) of a regular octagon
    /// with vertex angle pi/4 has angles pi/8, pi/8, pi/2, so the inradius
    /// b satisfies cosh b = cot(pi/8). g_0 translates by 2b along the
    /// imaginary axis and g_k = R_k g_0 R_k^{-1} with R_k the elliptic
    /// rotation about i by k*pi/4. Opposite sides are paired: g_{k+4} is
    /// g_k^{-1}.
    pub fn bolza() -> Self {
        let b = uhp::acosh((std::f64::consts::FRAC_PI_8).tan().recip());
        let g0 = Mobius::axis_translation(b);
        let mut generators = Vec::with_capacity(8);
        for k in 0..8 {
            let r = Mobius::rotation_about_i(k as f64 * std::f64::consts::FRAC_PI_8);
            generators.push(r * g0 * r.inverse());
        }
        let i = Complex64::new(0.0, 1.0);
        let neighbors = generators.iter().map(|g| g.apply(i)).collect();
        FuchsianDomain {
            variant: DomainVariant::Bolza,
            generators,
            inverse_index: (0..8).map(|k| (k + 4) % 8).collect(),
            neighbors,
            area: 4.0 * std::f64::consts::PI,
        }
    }

    pub fn variant(&self) -> DomainVariant {
        self.variant
    }

    pub fn generators(&self) -> &[Mobius<f64>] {
        &self.generators
    }

    pub fn generator_inverse_index(&self, k: usize) -> usize {
        self.inverse_index[k]
    }

    /// Exact hyperbolic area of the quotient.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// A reference point well inside the domain.
    pub fn center(&self) -> Complex64 {
        match self.variant {
            DomainVariant::Modular => Complex64::new(0.0, 1.25),
            DomainVariant::Bolza => Complex64::new(0.0, 1.0),
        }
    }

    /// Half the distance from the center to its nearest neighbor center
    /// (Bolza), or a safe interior radius (modular).
    pub fn inradius(&self) -> f64 {
        match self.variant {
            DomainVariant::Modular => 0.2,
            DomainVariant::Bolza => uhp::acosh((std::f64::consts::FRAC_PI_8).tan().recip()),
        }
    }

    /// Fundamental-domain membership (with boundary slack).
    pub fn contains(&self, z: Complex64) -> bool {
        match self.variant {
            DomainVariant::Modular => {
                z.re.abs() <= 0.5 + MEMBER_TOL && z.norm_sqr() >= 1.0 - MEMBER_TOL
            }
            DomainVariant::Bolza => {
                // Dirichlet test: no neighbor center is closer than i.
                let here = uhp::cosh_distance(z, self.center());
                self.neighbors
                    .iter()
                    .all(|&w| uhp::cosh_distance(z, w) >= here - MEMBER_TOL)
            }
        }
    }

    /// Reduce a unit tangent into the fundamental domain.
    ///
    /// Returns the reduced tangent and the word of generator indices that
    /// was applied (left to right). Applying the inverse word to the result
    /// recovers the input.
    pub fn reduce(&self, u: &UnitTangent) -> Result<(UnitTangent, Vec<usize>)> {
        let mut cur = *u;
        let mut word = Vec::new();
        for _ in 0..WORD_CAP {
            let z = cur.point();
            if !(z.im > 0.0 && z.is_finite()) {
                return Err(Error::NumericDomain(format!(
                    "reduction left the upper half-plane at ({}, {})",
                    z.re, z.im
                )));
            }
            if self.contains(z) {
                return Ok((cur, word));
            }
            match self.variant {
                DomainVariant::Modular => {
                    let n = z.re.round();
                    if n != 0.0 {
                        // Apply T^{-n} in one multiplication; the word
                        // records |n| unit steps.
                        let idx = if n > 0.0 { 1 } else { 0 };
                        for _ in 0..(n.abs() as usize).min(WORD_CAP) {
                            word.push(idx);
                        }
                        cur = cur.translate(&Mobius::translation(-n));
                    } else {
                        word.push(2);
                        cur = cur.translate(&self.generators[2]);
                    }
                }
                DomainVariant::Bolza => {
                    // Move toward the Dirichlet center: if g_k(i) is the
                    // nearest orbit point of i, apply g_k^{-1}.
                    let here = uhp::cosh_distance(z, self.center());
                    let (best, best_val) = self
                        .neighbors
                        .iter()
                        .enumerate()
                        .map(|(k, &w)| (k, uhp::cosh_distance(z, w)))
                        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                        .unwrap();
                    if best_val >= here {
                        // Numerically on the boundary; accept as inside.
                        return Ok((cur, word));
                    }
                    let idx = self.inverse_index[best];
                    word.push(idx);
                    cur = cur.translate(&self.generators[idx]);
                }
            }
        }
        let z = u.point();
        Err(Error::ReductionFailure {
            re: z.re,
            im: z.im,
            cap: WORD_CAP,
            partial: word,
        })
    }

    /// Compose the group element of a word (generator indices applied left
    /// to right, as recorded by `reduce`).
    pub fn word_element(&self, word: &[usize]) -> Mobius<f64> {
        word.iter()
            .rev()
            .fold(Mobius::identity(), |acc, &k| acc * self.generators[k])
    }

    /// The inverse of a recorded word.
    pub fn word_inverse(&self, word: &[usize]) -> Vec<usize> {
        word.iter().rev().map(|&k| self.inverse_index[k]).collect()
    }

    /// Verify the defining relations of the group at tolerance `tol`.
    ///
    /// Modular: S^2 = (ST)^3 = identity (projectively).
    /// Bolza: opposite pairings are mutual inverses and the vertex cycle
    /// g0 g1^{-1} g2 g3^{-1} g0^{-1} g1 g2^{-1} g3 is the identity — the
    /// genus-2 commutator relation in the octagon presentation.
    pub fn relation_residual(&self) -> f64 {
        match self.variant {
            DomainVariant::Modular => {
                let s = self.generators[2];
                let t = self.generators[0];
                let s2 = s * s;
                let st = s * t;
                let st3 = st * st * st;
                let id = Mobius::identity();
                s2.projective_dist(&id).max(st3.projective_dist(&id))
            }
            DomainVariant::Bolza => {
                let id = Mobius::identity();
                let mut worst: f64 = 0.0;
                for k in 0..4 {
                    let prod = self.generators[k] * self.generators[k + 4];
                    worst = worst.max(prod.projective_dist(&id));
                }
                let cycle = [0usize, 5, 2, 7, 4, 1, 6, 3];
                let m = cycle.iter().fold(id, |acc, &k| acc * self.generators[k]);
                worst.max(m.projective_dist(&id))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn modular_relations_hold() {
        let dom = FuchsianDomain::modular();
        assert!(dom.relation_residual() < 1e-12);
    }

    #[test]
    fn bolza_relations_hold() {
        let dom = FuchsianDomain::bolza();
        assert!(
            dom.relation_residual() < 1e-9,
            "residual {}",
            dom.relation_residual()
        );
    }

    #[test]
    fn bolza_side_pairing_maps_opposite_side_midpoints() {
        let dom = FuchsianDomain::bolza();
        let b = dom.inradius();
        // g_0 sends the bottom side midpoint e^{-b} i to the top one e^{b} i.
        let low = Complex64::new(0.0, (-b).exp());
        let high = Complex64::new(0.0, b.exp());
        let mapped = dom.generators()[0].apply(low);
        assert!((mapped - high).norm() < 1e-12);
    }

    #[test]
    fn inside_point_reduces_with_empty_word() {
        for dom in [FuchsianDomain::modular(), FuchsianDomain::bolza()] {
            let u = UnitTangent::from_position(dom.center(), 1.0);
            let (v, word) = dom.reduce(&u).unwrap();
            assert!(word.is_empty());
            assert!((v.point() - u.point()).norm() < 1e-12);
        }
    }

    #[test]
    fn modular_reduction_lands_in_domain_and_round_trips() {
        let dom = FuchsianDomain::modular();
        let u = UnitTangent::from_position(Complex64::new(2.3, 0.8), 0.7);
        let (v, word) = dom.reduce(&u).unwrap();
        let z = v.point();
        assert!(z.re.abs() <= 0.5 + 1e-9);
        assert!(z.norm_sqr() >= 1.0 - 1e-9);
        assert!(!word.is_empty());
        // Undo the word.
        let gamma = dom.word_element(&word);
        let back = v.translate(&gamma.inverse());
        assert!((back.point() - u.point()).norm() < 1e-9);
    }

    #[test]
    fn reduction_round_trips_on_random_points() {
        let mut r = RngStream::new(77, 0);
        for dom in [FuchsianDomain::modular(), FuchsianDomain::bolza()] {
            for _ in 0..200 {
                let z = Complex64::new(r.uniform_in(-4.0, 4.0), r.uniform_in(0.05, 5.0));
                let u = UnitTangent::from_position(z, r.uniform_in(0.0, std::f64::consts::TAU));
                let (v, word) = dom.reduce(&u).unwrap();
                assert!(dom.contains(v.point()), "{:?} not inside", v.point());
                let inv = dom.word_inverse(&word);
                let undo = dom.word_element(&inv);
                let back = v.translate(&undo);
                assert!(
                    (back.point() - u.point()).norm() < 1e-9,
                    "round trip failed for {z:?}: got {:?}",
                    back.point()
                );
            }
        }
    }

    #[test]
    fn bolza_area_is_gauss_bonnet() {
        assert!((FuchsianDomain::bolza().area() - 4.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn flow_and_reduction_commute_on_the_quotient() {
        // Advancing two representatives of the same quotient point and
        // reducing yields the same point of the domain (up to a boundary
        // generator when the orbit lands on an edge).
        let mut r = RngStream::new(4242, 7);
        for dom in [FuchsianDomain::modular(), FuchsianDomain::bolza()] {
            for _ in 0..100 {
                let z = Complex64::new(r.uniform_in(-0.4, 0.4), r.uniform_in(0.9, 1.4));
                let u = UnitTangent::from_position(z, r.uniform_in(0.0, std::f64::consts::TAU));
                let (u_red, _) = dom.reduce(&u).unwrap();
                // A different representative of the same quotient point.
                let gamma =
                    &dom.generators()[(r.uniform_in(0.0, dom.generators().len() as f64)) as usize];
                let v = u.translate(gamma);
                let t = r.uniform_in(0.0, 0.5);
                let a = dom.reduce(&u_red.advance(t)).unwrap().0;
                let b = dom.reduce(&v.advance(t)).unwrap().0;
                let direct = (a.point() - b.point()).norm();
                let via_generator = dom
                    .generators()
                    .iter()
                    .map(|g| (g.apply(b.point()) - a.point()).norm())
                    .fold(direct, f64::min);
                assert!(
                    via_generator < 1e-9,
                    "commutation failed: {:?} vs {:?}",
                    a.point(),
                    b.point()
                );
            }
        }
    }

    #[test]
    fn long_reduced_orbits_keep_unimodular_elements() {
        // Reduction keeps the group element bounded, so the per-product
        // renormalization holds det = 1 to 1e-12 over long orbits.
        let dom = FuchsianDomain::bolza();
        let mut u = UnitTangent::from_position(Complex64::new(0.21, 0.9), 0.77);
        for k in 0..2000 {
            u = dom.reduce(&u.advance(0.5)).unwrap().0;
            let det = u.group().det();
            assert!((det - 1.0).abs() < 1e-12, "det {det} at window {k}");
        }
    }
}
