//! Cylinder-set measures and the conditional dimension: the fraction of
//! invariant-measure samples whose orbit enters B_l within time epsilon,
//! and the limit exponent of log mu(C_{eps,l}) in log l.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{System, TimeKind};
use crate::error::{Error, Result};
use crate::estimators::fit::{loglog_fit, LinearFit};
use crate::estimators::hitting::hitting_times_multi;
use crate::rng::RngStream;
use crate::targets::TargetFamily;

/// Monte Carlo estimate of mu(C_{eps,l}).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CylinderEstimate {
    pub epsilon: f64,
    pub l: f64,
    pub mu_hat: f64,
    /// Binomial standard error.
    pub stderr: f64,
    pub n: u64,
    pub hits: u64,
}

/// Per-epsilon scaling fit of log mu against log l.
#[derive(Debug, Clone, Serialize)]
pub struct EpsilonSlope {
    pub epsilon: f64,
    pub fit: LinearFit,
    pub estimates: Vec<CylinderEstimate>,
    pub dropped_radii: Vec<f64>,
}

/// The conditional-dimension estimate: per-epsilon slopes, the slope at
/// the smallest epsilon, and the stability gap across epsilons.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionalDimension {
    pub per_epsilon: Vec<EpsilonSlope>,
    pub d: f64,
    pub stability_gap: f64,
}

const CHUNK: u64 = 4096;

/// Entry times of n invariant samples into each radius, within a common
/// horizon. Returns per-radius hit counts for each of the given epsilon
/// thresholds: hits[e][k] counts entry times < eps_grid[e] for radius k.
///
/// For discrete-time systems the cylinder convention is integer: entry
/// within {0, 1, ..., ceil(eps) - 1}.
fn cylinder_hits(
    system: &dyn System,
    target: &TargetFamily,
    eps_grid: &[f64],
    radii: &[f64],
    n: u64,
    rng: &RngStream,
) -> Result<Vec<Vec<u64>>> {
    let eps_max = eps_grid.iter().cloned().fold(0.0f64, f64::max);
    let horizon = match system.time_kind() {
        TimeKind::Map => (eps_max.ceil() - 1.0).max(0.0),
        TimeKind::Flow => eps_max,
    };
    let t_maxes = vec![horizon; radii.len()];
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Result<Vec<Vec<u64>>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![vec![0u64; radii.len()]; eps_grid.len()];
            let mut stream = rng.substream(c);
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            for _ in lo..hi {
                let x0 = system.sample_invariant(&mut stream)?;
                let taus = hitting_times_multi(system, &x0, target, radii, &t_maxes)?;
                for (k, &(tau, censored)) in taus.iter().enumerate() {
                    if censored {
                        continue;
                    }
                    for (e, &eps) in eps_grid.iter().enumerate() {
                        if tau < eps {
                            local[e][k] += 1;
                        }
                    }
                }
            }
            Ok(local)
        })
        .collect();
    let mut hits = vec![vec![0u64; radii.len()]; eps_grid.len()];
    for p in partials {
        let p = p?;
        for (e, row) in p.iter().enumerate() {
            for (k, &h) in row.iter().enumerate() {
                hits[e][k] += h;
            }
        }
    }
    Ok(hits)
}

/// Monte Carlo fraction of invariant-measure samples whose orbit enters
/// B_l within [0, epsilon).
pub fn cylinder_measure(
    system: &dyn System,
    target: &TargetFamily,
    epsilon: f64,
    l: f64,
    n: u64,
    rng: &RngStream,
) -> Result<CylinderEstimate> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if n < 1000 {
        return Err(Error::InvalidArgument(format!(
            "cylinder estimates need n >= 1000 samples, got {n}"
        )));
    }
    let hits = cylinder_hits(system, target, &[epsilon], &[l], n, rng)?[0][0];
    let mu_hat = hits as f64 / n as f64;
    let stderr = (mu_hat * (1.0 - mu_hat) / n as f64).sqrt();
    Ok(CylinderEstimate {
        epsilon,
        l,
        mu_hat,
        stderr,
        n,
        hits,
    })
}

/// Estimate d = lim_{eps->0} lim_{l->0} log mu(C_{eps,l}) / log l.
///
/// The limits keep their order: one slope is fitted per epsilon over the
/// l-grid, and the reported d is the slope at the smallest epsilon,
/// together with the max pairwise slope gap as a stability flag.
pub fn conditional_dimension(
    system: &dyn System,
    target: &TargetFamily,
    eps_grid: &[f64],
    l_grid: &[f64],
    n: u64,
    rng: &RngStream,
) -> Result<ConditionalDimension> {
    if eps_grid.len() < 3 || l_grid.len() < 3 {
        return Err(Error::InvalidArgument(
            "conditional dimension needs at least 3 epsilons and 3 radii".into(),
        ));
    }
    for w in l_grid.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::InvalidArgument(
                "l grid must be strictly decreasing".into(),
            ));
        }
    }
    let hits = cylinder_hits(system, target, eps_grid, l_grid, n, rng)?;

    let mut per_epsilon = Vec::with_capacity(eps_grid.len());
    for (e, &eps) in eps_grid.iter().enumerate() {
        let mut estimates = Vec::with_capacity(l_grid.len());
        let mut points = Vec::new();
        let mut dropped = Vec::new();
        for (k, &l) in l_grid.iter().enumerate() {
            let h = hits[e][k];
            let mu_hat = h as f64 / n as f64;
            let stderr = (mu_hat * (1.0 - mu_hat) / n as f64).sqrt();
            estimates.push(CylinderEstimate {
                epsilon: eps,
                l,
                mu_hat,
                stderr,
                n,
                hits: h,
            });
            if h == 0 {
                dropped.push(l);
            } else {
                points.push((l.ln(), mu_hat.ln()));
            }
        }
        if points.len() < 3 {
            return Err(Error::InsufficientData(format!(
                "epsilon {eps}: only {} radii with hits",
                points.len()
            )));
        }
        let fit = loglog_fit(&points, None)?;
        per_epsilon.push(EpsilonSlope {
            epsilon: eps,
            fit,
            estimates,
            dropped_radii: dropped,
        });
    }

    // Smallest epsilon carries the estimate.
    let smallest = per_epsilon
        .iter()
        .min_by(|a, b| a.epsilon.partial_cmp(&b.epsilon).unwrap())
        .unwrap();
    let d = smallest.fit.slope;
    let mut gap: f64 = 0.0;
    for a in &per_epsilon {
        for b in &per_epsilon {
            gap = gap.max((a.fit.slope - b.fit.slope).abs());
        }
    }
    Ok(ConditionalDimension {
        per_epsilon,
        d,
        stability_gap: gap,
    })
}
