//! Excursion statistics of geodesic orbits: the running minimum of the
//! distance to a marked point (approach law, exponent 1/(n-1)) and, on
//! the modular surface, the running maximum (cusp excursions).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::domain::{DomainVariant, FuchsianDomain};
use crate::hyperbolic::scan;
use crate::hyperbolic::tangent::UnitTangent;
use crate::hyperbolic::translates::TranslateCache;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExcursionPoint {
    pub t: f64,
    /// Running min of the base distance to the marked point.
    pub d: f64,
    /// -log d / log t, the approach-law statistic.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcursionCurve {
    pub trajectory_id: u64,
    pub points: Vec<ExcursionPoint>,
    /// Running max over interior local minima of -log d / log t.
    pub local_min_stat: Vec<f64>,
}

/// Track the running infimum d_t of the distance from the orbit to the
/// cached point, with exact pass minima, at the grid times.
pub fn excursion_curve(
    dom: &FuchsianDomain,
    cache: &TranslateCache,
    trajectory_id: u64,
    u0: &UnitTangent,
    t_grid: &[f64],
) -> Result<ExcursionCurve> {
    validate_grid(t_grid)?;
    let curve = scan::run_min_curve(dom, cache, u0, t_grid)?;
    let points = curve
        .at_grid
        .iter()
        .map(|&(t, d)| ExcursionPoint {
            t,
            d,
            ratio: ratio_of(d, t),
        })
        .collect();
    Ok(ExcursionCurve {
        trajectory_id,
        points,
        local_min_stat: curve.local_min_stat,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CuspPoint {
    pub t: f64,
    /// Running max of the base distance to the marked point.
    pub d: f64,
    /// d / log t, the cusp-excursion statistic.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CuspCurve {
    pub trajectory_id: u64,
    pub points: Vec<CuspPoint>,
}

/// Running maximum of the distance to the marked point: the excursions up
/// the cusp of the modular surface (half-window sampling accuracy).
pub fn cusp_excursion(
    dom: &FuchsianDomain,
    cache: &TranslateCache,
    trajectory_id: u64,
    u0: &UnitTangent,
    t_grid: &[f64],
) -> Result<CuspCurve> {
    if dom.variant() != DomainVariant::Modular {
        return Err(Error::InvalidArgument(
            "cusp excursions need the modular surface (the only non-compact catalogue entry)"
                .into(),
        ));
    }
    validate_grid(t_grid)?;
    let curve = scan::run_max_curve(dom, cache, u0, t_grid)?;
    let points = curve
        .iter()
        .map(|&(t, d)| CuspPoint {
            t,
            d,
            ratio: if t > 1.0 { d / t.ln() } else { f64::NAN },
        })
        .collect();
    Ok(CuspCurve {
        trajectory_id,
        points,
    })
}

fn ratio_of(d: f64, t: f64) -> f64 {
    if d > 0.0 && t > 1.0 {
        -d.ln() / t.ln()
    } else {
        f64::NAN
    }
}

fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidArgument(
                "time grid must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}
