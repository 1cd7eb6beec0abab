//! Poincaré-section reduction for suspension flows: the flow hitting time
//! of a section target is the sum of return times along the induced map,
//! exactly, and the two scaling exponents agree.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::TimeKind;
use crate::error::{Error, Result};
use crate::estimators::exponent::{RadiusSchedule, TMaxRule};
use crate::estimators::fit::{loglog_fit, median, LinearFit};
use crate::geom::torus::torus_dist;
use crate::rng::RngStream;
use crate::systems::SuspensionFlow;

#[derive(Debug, Clone, Serialize)]
pub struct SectionRadius {
    pub r: f64,
    pub total: usize,
    pub censored: usize,
    pub median_log_tau_flow: f64,
    pub median_log_tau_section: f64,
    /// Median of tau_flow / (tau_section * mean_return); drifts to 1.
    pub median_ratio: f64,
    pub dropped: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionReport {
    /// Estimate of the mean return time (the roof integral against the
    /// section measure): total flow time over total crossings.
    pub mean_return: f64,
    /// Largest per-trajectory residual of the sum identity
    /// tau_flow - sum of return times; exactly 0 for suspensions.
    pub max_identity_residual: f64,
    pub flow_fit: LinearFit,
    pub section_fit: LinearFit,
    pub per_radius: Vec<SectionRadius>,
    pub warnings: Vec<String>,
}

struct TrajectoryHits {
    /// Per radius: (tau_section steps, tau_flow time, censored).
    hits: Vec<(f64, f64, bool)>,
    /// Bit-exact residual of the identity, maximized over radii.
    residual: f64,
    total_time: f64,
    total_crossings: u64,
}

const CENSOR_CAP: f64 = 0.10;

/// Verify the section identity and measure both exponents for base-ball
/// section targets S_r around `center`.
pub fn section_check(
    flow: &SuspensionFlow,
    center: &[f64],
    schedule: &RadiusSchedule,
    ensemble: usize,
    rule: &TMaxRule,
    master_seed: u64,
    stream_base: u64,
) -> Result<SectionReport> {
    if center.len() != flow.base().dimension() {
        return Err(Error::InvalidArgument(format!(
            "section center dimension {} vs base dimension {}",
            center.len(),
            flow.base().dimension()
        )));
    }
    let budgets: Vec<f64> = schedule
        .l_values
        .iter()
        .map(|&r| rule.t_max(r, TimeKind::Map))
        .collect();

    let per_traj: Vec<Result<TrajectoryHits>> = (0..ensemble as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(master_seed, stream_base + i);
            // The induced section measure of a suspension is the base
            // invariant measure: Lebesgue for the torus maps.
            let x0: Vec<f64> = (0..center.len()).map(|_| rng.uniform()).collect();
            Ok(trajectory_hits(flow, &x0, center, schedule, &budgets))
        })
        .collect();

    let mut all: Vec<TrajectoryHits> = Vec::with_capacity(ensemble);
    for t in per_traj {
        all.push(t?);
    }

    let max_identity_residual = all.iter().map(|t| t.residual).fold(0.0f64, f64::max);
    let total_time: f64 = all.iter().map(|t| t.total_time).sum();
    let total_crossings: u64 = all.iter().map(|t| t.total_crossings).sum();
    let mean_return = total_time / total_crossings.max(1) as f64;

    let mut per_radius = Vec::new();
    let mut flow_points = Vec::new();
    let mut section_points = Vec::new();
    let mut warnings = Vec::new();
    for (k, &r) in schedule.l_values.iter().enumerate() {
        let rows: Vec<&(f64, f64, bool)> = all.iter().map(|t| &t.hits[k]).collect();
        let total = rows.len();
        let censored = rows.iter().filter(|h| h.2).count();
        let sec_logs: Vec<f64> = rows
            .iter()
            .filter(|h| !h.2)
            .map(|h| h.0.max(1.0).ln())
            .collect();
        let flow_logs: Vec<f64> = rows
            .iter()
            .filter(|h| !h.2)
            .map(|h| h.1.max(f64::MIN_POSITIVE).ln())
            .collect();
        let ratios: Vec<f64> = rows
            .iter()
            .filter(|h| !h.2)
            .map(|h| h.1 / (h.0 * mean_return))
            .collect();
        let frac = censored as f64 / total.max(1) as f64;
        let dropped = frac > CENSOR_CAP || sec_logs.is_empty();
        if dropped {
            warnings.push(format!("radius {r}: dropped ({censored}/{total} censored)"));
        } else {
            flow_points.push((-r.ln(), median(&flow_logs)));
            section_points.push((-r.ln(), median(&sec_logs)));
        }
        per_radius.push(SectionRadius {
            r,
            total,
            censored,
            median_log_tau_flow: if flow_logs.is_empty() {
                f64::NAN
            } else {
                median(&flow_logs)
            },
            median_log_tau_section: if sec_logs.is_empty() {
                f64::NAN
            } else {
                median(&sec_logs)
            },
            median_ratio: if ratios.is_empty() {
                f64::NAN
            } else {
                median(&ratios)
            },
            dropped,
        });
    }
    if flow_points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "only {} usable radii after censoring",
            flow_points.len()
        )));
    }
    Ok(SectionReport {
        mean_return,
        max_identity_residual,
        flow_fit: loglog_fit(&flow_points, None)?,
        section_fit: loglog_fit(&section_points, None)?,
        per_radius,
        warnings,
    })
}

/// March the induced map once for all radii; flow times accumulate the
/// roof in visit order, which is bit-identical to the sum identity's
/// right-hand side.
fn trajectory_hits(
    flow: &SuspensionFlow,
    x0: &[f64],
    center: &[f64],
    schedule: &RadiusSchedule,
    budgets: &[f64],
) -> TrajectoryHits {
    let k = schedule.l_values.len();
    let mut hit: Vec<Option<(f64, f64)>> = vec![None; k];
    let mut ptr = 0usize;
    let mut horizon = budgets.iter().cloned().fold(0.0f64, f64::max);

    let mut base = x0.to_vec();
    let mut elapsed = 0.0f64;
    let mut n = 0u64;
    // Return-time sums for the residual check, accumulated separately.
    let mut roof_sum = 0.0f64;
    loop {
        // One return: flow up through the roof, land on the section.
        let gap = flow.roof().eval(&base);
        elapsed += gap;
        roof_sum += flow.roof().eval(&base);
        base = flow.base().step(&base);
        n += 1;
        let d = torus_dist(&base, center);
        let ptr_before = ptr;
        while ptr < k && d < schedule.l_values[ptr] {
            hit[ptr] = Some((n as f64, elapsed));
            ptr += 1;
        }
        if ptr == k {
            break;
        }
        if ptr != ptr_before {
            horizon = budgets[ptr..].iter().cloned().fold(0.0f64, f64::max);
        }
        if n as f64 >= horizon {
            break;
        }
    }

    // The identity residual: elapsed flow time vs the independent sum of
    // return times along the same visits.
    let residual = (elapsed - roof_sum).abs();

    let hits = (0..k)
        .map(|j| match hit[j] {
            Some((steps, time)) if steps <= budgets[j] => (steps, time, false),
            _ => (budgets[j], f64::NAN, true),
        })
        .collect();
    TrajectoryHits {
        hits,
        residual,
        total_time: elapsed,
        total_crossings: n,
    }
}
