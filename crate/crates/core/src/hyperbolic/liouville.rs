//! Liouville-measure sampling on the unit tangent bundle of a quotient:
//! hyperbolic area (dx dy / y^2) on the base times a uniform angle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::uhp;
use crate::hyperbolic::domain::{DomainVariant, FuchsianDomain};
use crate::hyperbolic::tangent::UnitTangent;
use crate::rng::RngStream;

const ATTEMPT_CAP: u64 = 100_000;

/// One sample from the Liouville measure: rejection sampling of the base
/// point in an exactly-known bounding region, uniform direction.
pub fn liouville_sample(dom: &FuchsianDomain, rng: &mut RngStream) -> Result<UnitTangent> {
    let z = base_sample(dom, rng)?;
    let theta = rng.uniform_in(0.0, std::f64::consts::TAU);
    Ok(UnitTangent::from_position(z, theta))
}

/// Monte Carlo estimate of the domain's hyperbolic area: bounding-region
/// measure times acceptance rate. Oracle check for the exact values
/// pi/3 (modular) and 4 pi (Bolza).
pub fn estimate_area(dom: &FuchsianDomain, rng: &mut RngStream, n: u64) -> Result<f64> {
    let mut accepted = 0u64;
    for _ in 0..n {
        if propose(dom, rng).map(|z| dom.contains(z))? {
            accepted += 1;
        }
    }
    Ok(bounding_measure(dom) * accepted as f64 / n as f64)
}

fn base_sample(dom: &FuchsianDomain, rng: &mut RngStream) -> Result<Complex64> {
    for _ in 0..ATTEMPT_CAP {
        let z = propose(dom, rng)?;
        if dom.contains(z) {
            return Ok(z);
        }
    }
    Err(Error::SamplingFailure {
        attempts: ATTEMPT_CAP,
        accepted: 0,
        rate: 0.0,
    })
}

/// Propose a point with density proportional to 1/y^2 on the bounding
/// region (exact inverse-CDF construction, no discretization).
fn propose(dom: &FuchsianDomain, rng: &mut RngStream) -> Result<Complex64> {
    match dom.variant() {
        DomainVariant::Modular => {
            // Strip |x| <= 1/2, y >= sqrt(3)/2 with density 1/y^2:
            // P(Y > y) = y0 / y, so Y = y0 / U.
            let y0 = (3.0f64).sqrt() / 2.0;
            let x = rng.uniform_in(-0.5, 0.5);
            let u = loop {
                let u = rng.uniform();
                if u > 0.0 {
                    break u;
                }
            };
            Ok(Complex64::new(x, y0 / u))
        }
        DomainVariant::Bolza => {
            // Hyperbolic disk of the octagon circumradius R about the
            // center: radial CDF proportional to cosh(rho) - 1.
            let cot = std::f64::consts::FRAC_PI_8.tan().recip();
            let r_circ = uhp::acosh(cot * cot);
            let u = rng.uniform();
            let rho = uhp::acosh(1.0 + u * (r_circ.cosh() - 1.0));
            let phi = rng.uniform_in(0.0, std::f64::consts::TAU);
            // Disk-model radius for hyperbolic radius rho, then Cayley.
            let s = (rho / 2.0).tanh();
            let w = Complex64::from_polar(s, phi);
            Ok(uhp::disk_to_uhp(w))
        }
    }
}

fn bounding_measure(dom: &FuchsianDomain) -> f64 {
    match dom.variant() {
        // integral over the strip of dx dy / y^2 = 1 * (1 / y0).
        DomainVariant::Modular => 2.0 / (3.0f64).sqrt(),
        // hyperbolic disk area 2 pi (cosh R - 1).
        DomainVariant::Bolza => {
            let cot = std::f64::consts::FRAC_PI_8.tan().recip();
            let r_circ = uhp::acosh(cot * cot);
            2.0 * std::f64::consts::PI * (r_circ.cosh() - 1.0)
        }
    }
}
