//! Shrinking-target families: 1-Lipschitz level functions whose sublevel
//! sets B_l = {f < l} are the targets of every hitting experiment.

use std::fmt;
use std::sync::Arc;

use crate::dynamics::{CoordVec, PhasePoint};
use crate::error::{Error, Result};
use crate::geom::torus::torus_dist;
use crate::geom::uhp;
use crate::hyperbolic::domain::FuchsianDomain;
use crate::hyperbolic::scan;
use crate::hyperbolic::tangent::UnitTangent;
use crate::hyperbolic::translates::TranslateCache;

/// What the level function measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    /// Distance to a point of the base manifold (torus or quotient surface).
    BaseBall,
    /// Surrogate-Sasaki distance to a unit tangent (hyperbolic only).
    SasakiBall,
    /// Arbitrary Lipschitz level function.
    Sublevel,
}

/// A target family; `level` is 1-Lipschitz for the ball kinds (sublevel
/// targets carry their own constant).
#[derive(Clone)]
pub enum TargetFamily {
    TorusBall {
        center: CoordVec,
    },
    HypBall {
        domain: Arc<FuchsianDomain>,
        cache: Arc<TranslateCache>,
    },
    HypSasakiBall {
        domain: Arc<FuchsianDomain>,
        cache: Arc<TranslateCache>,
    },
    Sublevel {
        name: String,
        lipschitz: f64,
        level: Arc<dyn Fn(&PhasePoint) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for TargetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetFamily::TorusBall { center } => {
                write!(f, "TorusBall(center={:?})", center.as_slice())
            }
            TargetFamily::HypBall { cache, .. } => {
                write!(f, "HypBall(center={:?})", cache.center().point())
            }
            TargetFamily::HypSasakiBall { cache, .. } => {
                write!(f, "HypSasakiBall(center={:?})", cache.center().point())
            }
            TargetFamily::Sublevel { name, .. } => write!(f, "Sublevel({name})"),
        }
    }
}

impl TargetFamily {
    pub fn torus_ball(center: &[f64]) -> Result<Self> {
        if center.iter().any(|c| !(0.0..1.0).contains(c)) {
            return Err(Error::InvalidArgument(format!(
                "torus ball center must have coordinates in [0,1), got {center:?}"
            )));
        }
        Ok(TargetFamily::TorusBall {
            center: CoordVec::new(center),
        })
    }

    /// Base ball around a point of the quotient; `r_max` sizes the
    /// translate cache (largest radius any scan will request).
    pub fn hyp_ball(domain: Arc<FuchsianDomain>, center: UnitTangent, r_max: f64) -> Result<Self> {
        let cache = TranslateCache::build(&domain, &center, r_max + scan::WINDOW + 0.1)?;
        Ok(TargetFamily::HypBall {
            domain,
            cache: Arc::new(cache),
        })
    }

    /// Surrogate-Sasaki ball around a unit tangent of the quotient.
    pub fn sasaki_ball(
        domain: Arc<FuchsianDomain>,
        center: UnitTangent,
        r_max: f64,
    ) -> Result<Self> {
        let cache = TranslateCache::build(&domain, &center, r_max + scan::WINDOW + 0.1)?;
        Ok(TargetFamily::HypSasakiBall {
            domain,
            cache: Arc::new(cache),
        })
    }

    pub fn sublevel(
        name: &str,
        lipschitz: f64,
        level: Arc<dyn Fn(&PhasePoint) -> f64 + Send + Sync>,
    ) -> Self {
        TargetFamily::Sublevel {
            name: name.to_string(),
            lipschitz,
            level,
        }
    }

    pub fn kind(&self) -> TargetKind {
        match self {
            TargetFamily::TorusBall { .. } => TargetKind::BaseBall,
            TargetFamily::HypBall { .. } => TargetKind::BaseBall,
            TargetFamily::HypSasakiBall { .. } => TargetKind::SasakiBall,
            TargetFamily::Sublevel { .. } => TargetKind::Sublevel,
        }
    }

    /// Lipschitz constant of the level function (1 for ball kinds).
    pub fn lipschitz(&self) -> f64 {
        match self {
            TargetFamily::Sublevel { lipschitz, .. } => *lipschitz,
            _ => 1.0,
        }
    }

    /// The level function f; B_l = {x : f(x) < l}.
    pub fn level(&self, x: &PhasePoint) -> Result<f64> {
        match self {
            TargetFamily::TorusBall { center } => {
                let c = x.as_coords()?;
                if c.len() != center.len() {
                    return Err(Error::InvalidArgument(format!(
                        "target center dimension {} vs point dimension {}",
                        center.len(),
                        c.len()
                    )));
                }
                Ok(torus_dist(c.as_slice(), center.as_slice()))
            }
            TargetFamily::HypBall { cache, .. } => {
                let u = x.as_tangent()?;
                Ok(uhp::acosh(cache.min_cosh_distance(u.point())))
            }
            TargetFamily::HypSasakiBall { cache, .. } => {
                let u = x.as_tangent()?;
                Ok(scan::sasaki_level(cache, u))
            }
            TargetFamily::Sublevel { level, .. } => Ok(level(x)),
        }
    }

    /// Largest radius the target's caches support.
    pub fn r_max(&self) -> f64 {
        match self {
            TargetFamily::HypBall { cache, .. } | TargetFamily::HypSasakiBall { cache, .. } => {
                cache.coverage() - scan::WINDOW - 0.05
            }
            _ => f64::INFINITY,
        }
    }
}
