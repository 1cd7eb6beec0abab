//! The hitting-time scaling exponent: regress median log tau against
//! -log l over a shrinking radius schedule and a trajectory ensemble.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{System, TimeKind};
use crate::error::{Error, Result};
use crate::estimators::fit::{iqr, loglog_fit, median, LinearFit};
use crate::estimators::hitting::{hitting_times_multi, HitRecord};
use crate::rng::RngStream;
use crate::targets::TargetFamily;

/// Strictly decreasing radii, geometric by default (ratio 1/2 equalizes
/// regression leverage in -log l).
#[derive(Debug, Clone, Serialize)]
pub struct RadiusSchedule {
    pub l_values: Vec<f64>,
}

impl RadiusSchedule {
    pub fn geometric(l0: f64, ratio: f64, count: usize) -> Result<Self> {
        if l0.is_nan() || l0 <= 0.0 || ratio.is_nan() || ratio <= 0.0 || ratio >= 1.0 || count == 0
        {
            return Err(Error::InvalidArgument(format!(
                "geometric schedule needs l0 > 0, ratio in (0,1), count >= 1; \
                 got l0={l0}, ratio={ratio}, count={count}"
            )));
        }
        let l_values: Vec<f64> = (0..count).map(|k| l0 * ratio.powi(k as i32)).collect();
        Self::from_values(l_values)
    }

    pub fn from_values(l_values: Vec<f64>) -> Result<Self> {
        if l_values.is_empty() {
            return Err(Error::InvalidArgument("empty radius schedule".into()));
        }
        for w in l_values.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::InvalidArgument(
                    "radius schedule must be strictly decreasing".into(),
                ));
            }
        }
        if l_values[l_values.len() - 1] < 1e-9 {
            return Err(Error::InvalidArgument(
                "smallest radius is below the 1e-9 resolution floor".into(),
            ));
        }
        Ok(RadiusSchedule { l_values })
    }
}

/// Per-trajectory time budget as a function of the radius.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum TMaxRule {
    Fixed(f64),
    /// t_max(l) = coeff * l^{-exponent}; exponent should be (at least) the
    /// expected hitting exponent.
    PowerLaw {
        coeff: f64,
        exponent: f64,
    },
}

impl TMaxRule {
    pub fn t_max(&self, l: f64, kind: TimeKind) -> f64 {
        let raw = match *self {
            TMaxRule::Fixed(t) => t,
            TMaxRule::PowerLaw { coeff, exponent } => coeff * l.powf(-exponent),
        };
        match kind {
            TimeKind::Map => raw.ceil(),
            TimeKind::Flow => raw,
        }
    }
}

/// Summary of one radius in the schedule.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusStats {
    pub l: f64,
    pub total: usize,
    pub censored: usize,
    pub median_log_tau: f64,
    /// Interquartile range of log tau (uncensored records).
    pub dispersion: f64,
    /// Dropped from the fit (censoring above 10% or no usable records).
    pub dropped: bool,
}

/// The fitted scaling exponent with per-radius diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentFit {
    pub fit: LinearFit,
    pub per_radius: Vec<RadiusStats>,
    pub warnings: Vec<String>,
}

/// Maximum tolerated censoring fraction per radius.
const CENSOR_CAP: f64 = 0.10;

/// Collect the per-trajectory hit records for a schedule: trajectory i
/// samples its start point from stream `stream_base + i`, then measures
/// every radius along the same orbit.
pub fn collect_hits(
    system: &dyn System,
    target: &TargetFamily,
    schedule: &RadiusSchedule,
    ensemble: usize,
    rule: &TMaxRule,
    master_seed: u64,
    stream_base: u64,
) -> Result<Vec<HitRecord>> {
    let t_maxes: Vec<f64> = schedule
        .l_values
        .iter()
        .map(|&l| rule.t_max(l, system.time_kind()))
        .collect();
    let per_traj: Vec<Result<Vec<HitRecord>>> = (0..ensemble as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(master_seed, stream_base + i);
            let x0 = system.sample_invariant(&mut rng)?;
            let taus = hitting_times_multi(system, &x0, target, &schedule.l_values, &t_maxes)?;
            Ok(schedule
                .l_values
                .iter()
                .zip(taus)
                .map(|(&l, (tau, censored))| HitRecord {
                    trajectory_id: i,
                    l,
                    tau,
                    censored,
                })
                .collect())
        })
        .collect();
    let mut records = Vec::with_capacity(ensemble * schedule.l_values.len());
    for r in per_traj {
        records.extend(r?);
    }
    Ok(records)
}

/// Fit the exponent from a set of hit records (median log tau per radius
/// against -log l; radii with more than 10% censoring are dropped).
pub fn fit_from_records(schedule: &RadiusSchedule, records: &[HitRecord]) -> Result<ExponentFit> {
    let mut per_radius = Vec::with_capacity(schedule.l_values.len());
    let mut points = Vec::new();
    let mut warnings = Vec::new();
    for &l in &schedule.l_values {
        let of_l: Vec<&HitRecord> = records.iter().filter(|r| r.l == l).collect();
        let total = of_l.len();
        let censored = of_l.iter().filter(|r| r.censored).count();
        let logs: Vec<f64> = of_l
            .iter()
            .filter(|r| !r.censored)
            .map(|r| r.tau.max(f64::MIN_POSITIVE).ln())
            .collect();
        let frac = censored as f64 / total.max(1) as f64;
        let dropped = frac > CENSOR_CAP || logs.is_empty();
        if dropped {
            warnings.push(format!("radius {l}: dropped ({censored}/{total} censored)"));
        }
        let med = if logs.is_empty() {
            f64::NAN
        } else {
            median(&logs)
        };
        let disp = if logs.len() > 1 { iqr(&logs) } else { 0.0 };
        if !dropped {
            points.push((-l.ln(), med));
        }
        per_radius.push(RadiusStats {
            l,
            total,
            censored,
            median_log_tau: med,
            dispersion: disp,
            dropped,
        });
    }
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "only {} usable radii after censoring",
            points.len()
        )));
    }
    let fit = loglog_fit(&points, None)?;
    Ok(ExponentFit {
        fit,
        per_radius,
        warnings,
    })
}

/// End-to-end exponent measurement.
pub fn hitting_exponent(
    system: &dyn System,
    target: &TargetFamily,
    schedule: &RadiusSchedule,
    ensemble: usize,
    rule: &TMaxRule,
    master_seed: u64,
    stream_base: u64,
) -> Result<ExponentFit> {
    if ensemble < 30 {
        return Err(Error::InvalidArgument(format!(
            "ensemble must be at least 30, got {ensemble}"
        )));
    }
    let records = collect_hits(
        system,
        target,
        schedule,
        ensemble,
        rule,
        master_seed,
        stream_base,
    )?;
    fit_from_records(schedule, &records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::PhasePoint;
    use crate::systems::{CatMap, DoublingMap};
    use std::sync::Arc;

    #[test]
    fn schedule_validation() {
        assert!(RadiusSchedule::geometric(0.25, 0.5, 5).is_ok());
        assert!(RadiusSchedule::geometric(0.25, 1.5, 5).is_err());
        assert!(RadiusSchedule::geometric(1e-10, 0.5, 3).is_err());
        assert!(RadiusSchedule::from_values(vec![0.1, 0.2]).is_err());
    }

    #[test]
    fn synthetic_power_law_recovers_slope_two() {
        // tau forced to l^{-2} exactly: slope 2, r^2 = 1.
        #[derive(Debug)]
        struct LineFlow;
        impl System for LineFlow {
            fn name(&self) -> &str {
                "line"
            }
            fn time_kind(&self) -> TimeKind {
                TimeKind::Flow
            }
            fn dimension(&self) -> usize {
                1
            }
            fn velocity_bound(&self) -> f64 {
                1.0
            }
            fn parameters(&self) -> Vec<(String, f64)> {
                vec![]
            }
            fn advance(&self, x: &PhasePoint, dt: f64) -> Result<PhasePoint> {
                let v = x.as_coords()?.as_slice()[0];
                Ok(PhasePoint::coords(&[v + dt]))
            }
            fn sample_invariant(&self, _rng: &mut RngStream) -> Result<PhasePoint> {
                Ok(PhasePoint::coords(&[0.0]))
            }
        }
        let level = Arc::new(|p: &PhasePoint| -> f64 {
            let x = p.as_coords().unwrap().as_slice()[0];
            let x0 = 0.04;
            if x < x0 {
                x0.powf(-0.5) + (x0 - x) * 62.5
            } else {
                x.powf(-0.5)
            }
        });
        let target = TargetFamily::sublevel("inverse-sqrt", 62.5, level);
        let schedule = RadiusSchedule::geometric(0.5, 0.5, 4).unwrap();
        let fit = hitting_exponent(
            &LineFlow,
            &target,
            &schedule,
            30,
            &TMaxRule::PowerLaw {
                coeff: 100.0,
                exponent: 2.0,
            },
            1,
            0,
        )
        .unwrap();
        assert!(
            (fit.fit.slope - 2.0).abs() < 0.01,
            "slope {}",
            fit.fit.slope
        );
        assert!(fit.fit.r_squared > 0.9999);
    }

    #[test]
    fn cat_map_ball_exponent_is_two() {
        // Lebesgue ball measure on the 2-torus scales as l^2; the cat map
        // mixes exponentially, so the hitting exponent equals 2.
        let sys = CatMap;
        let target = TargetFamily::torus_ball(&[0.3, 0.7]).unwrap();
        let schedule = RadiusSchedule::geometric(0.125, 0.5, 5).unwrap();
        let fit = hitting_exponent(
            &sys,
            &target,
            &schedule,
            100,
            &TMaxRule::PowerLaw {
                coeff: 100.0,
                exponent: 2.0,
            },
            42,
            0,
        )
        .unwrap();
        assert!(
            (fit.fit.slope - 2.0).abs() < 0.25,
            "slope {} +- {}",
            fit.fit.slope,
            fit.fit.stderr
        );
    }

    #[test]
    fn doubling_map_ball_exponent_is_one() {
        // Radii start at 2^-4 so the intervals avoid the period <= 4
        // points whose short returns bias small-sample medians.
        let sys = DoublingMap;
        let target = TargetFamily::torus_ball(&[0.365]).unwrap();
        let schedule = RadiusSchedule::geometric(0.0625, 0.5, 6).unwrap();
        let fit = hitting_exponent(
            &sys,
            &target,
            &schedule,
            200,
            &TMaxRule::PowerLaw {
                coeff: 100.0,
                exponent: 1.0,
            },
            43,
            0,
        )
        .unwrap();
        assert!(
            (fit.fit.slope - 1.0).abs() < 0.15,
            "slope {}",
            fit.fit.slope
        );
    }

    #[test]
    fn small_ensemble_is_rejected() {
        let sys = DoublingMap;
        let target = TargetFamily::torus_ball(&[0.37]).unwrap();
        let schedule = RadiusSchedule::geometric(0.125, 0.5, 4).unwrap();
        assert!(
            hitting_exponent(&sys, &target, &schedule, 10, &TMaxRule::Fixed(1000.0), 1, 0).is_err()
        );
    }

    #[test]
    fn heavy_censoring_drops_radius() {
        // A tiny budget censors everything at the smallest radius.
        let sys = DoublingMap;
        let target = TargetFamily::torus_ball(&[0.37]).unwrap();
        let schedule = RadiusSchedule::geometric(0.25, 0.5, 4).unwrap();
        let fit = hitting_exponent(&sys, &target, &schedule, 50, &TMaxRule::Fixed(16.0), 7, 0);
        match fit {
            Ok(f) => {
                assert!(
                    f.per_radius.iter().any(|r| r.dropped),
                    "expected some radius dropped"
                );
            }
            Err(Error::InsufficientData(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn records_are_deterministic_in_seed() {
        let sys = CatMap;
        let target = TargetFamily::torus_ball(&[0.3, 0.7]).unwrap();
        let schedule = RadiusSchedule::geometric(0.25, 0.5, 3).unwrap();
        let rule = TMaxRule::Fixed(10_000.0);
        let a = collect_hits(&sys, &target, &schedule, 40, &rule, 9, 0).unwrap();
        let b = collect_hits(&sys, &target, &schedule, 40, &rule, 9, 0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.tau, y.tau);
            assert_eq!(x.censored, y.censored);
        }
    }
}
