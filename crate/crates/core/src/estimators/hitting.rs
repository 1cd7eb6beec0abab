//! First hitting times of shrinking targets.

use serde::Serialize;

use crate::dynamics::{PhasePoint, System, TimeKind};
use crate::error::{Error, Result};
use crate::hyperbolic::scan::{self, ScanOutcome};
use crate::targets::TargetFamily;

/// One hitting-time measurement. `censored` marks a timeout at `t_max`
/// (the budget, not an error).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HitRecord {
    pub trajectory_id: u64,
    pub l: f64,
    pub tau: f64,
    pub censored: bool,
}

/// First time the orbit of `x0` enters B_l = {level < l}, scanned up to
/// `t_max`.
///
/// Maps iterate exactly. Hyperbolic ball targets use the closed-form
/// window scan. Generic flow targets use a coarse scan at step
/// l / (4 v) with the Lipschitz no-miss bound, refined by certified
/// bisection to relative tolerance 1e-3.
pub fn hitting_time(
    system: &dyn System,
    x0: &PhasePoint,
    target: &TargetFamily,
    l: f64,
    t_max: f64,
) -> Result<(f64, bool)> {
    let taus = hitting_times_multi(system, x0, target, &[l], &[t_max])?;
    Ok(taus[0])
}

/// Hitting times of several nested targets along one orbit. Radii must be
/// strictly decreasing; each has its own budget. Sharing the orbit makes
/// tau non-increasing in l exact by construction.
pub fn hitting_times_multi(
    system: &dyn System,
    x0: &PhasePoint,
    target: &TargetFamily,
    radii: &[f64],
    t_maxes: &[f64],
) -> Result<Vec<(f64, bool)>> {
    assert_eq!(radii.len(), t_maxes.len());
    if radii.is_empty() {
        return Ok(Vec::new());
    }
    for w in radii.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::InvalidArgument(
                "radii must be strictly decreasing".into(),
            ));
        }
    }
    if radii[radii.len() - 1] <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "radii must be positive, got {radii:?}"
        )));
    }
    if target.r_max() < radii[0] {
        return Err(Error::InvalidArgument(format!(
            "radius {} exceeds the target's supported maximum {}",
            radii[0],
            target.r_max()
        )));
    }
    match system.time_kind() {
        TimeKind::Map => {
            for &tm in t_maxes {
                if tm.fract() != 0.0 || tm < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "map budgets must be non-negative integers, got {tm}"
                    )));
                }
            }
            map_hitting(system, x0, target, radii, t_maxes)
        }
        TimeKind::Flow => match target {
            TargetFamily::HypBall { domain, cache } => {
                let u = x0.as_tangent()?;
                let horizon = t_maxes.iter().cloned().fold(0.0f64, f64::max);
                let entries = scan::base_ball_entries_multi(domain, cache, u, radii, horizon)?;
                Ok(entries
                    .iter()
                    .zip(t_maxes)
                    .map(|(e, &tm)| match e {
                        Some(t) if *t <= tm => (*t, false),
                        _ => (tm, true),
                    })
                    .collect())
            }
            TargetFamily::HypSasakiBall { domain, cache } => {
                let u = x0.as_tangent()?;
                radii
                    .iter()
                    .zip(t_maxes)
                    .map(|(&r, &tm)| {
                        Ok(
                            match scan::sasaki_ball_first_entry(domain, cache, u, r, tm)? {
                                ScanOutcome::Entry(t) => (t, false),
                                ScanOutcome::Timeout => (tm, true),
                            },
                        )
                    })
                    .collect()
            }
            _ => radii
                .iter()
                .zip(t_maxes)
                .map(|(&r, &tm)| generic_flow_hitting(system, x0, target, r, tm))
                .collect(),
        },
    }
}

/// Exact iteration for maps: first n >= 0 with level(T^n x) < l. Nested
/// radii share the orbit; each radius keeps its own step budget.
fn map_hitting(
    system: &dyn System,
    x0: &PhasePoint,
    target: &TargetFamily,
    radii: &[f64],
    t_maxes: &[f64],
) -> Result<Vec<(f64, bool)>> {
    let k = radii.len();
    let mut hit_at: Vec<Option<u64>> = vec![None; k];
    let mut ptr = 0usize; // largest radius not yet hit
    let mut horizon = t_maxes.iter().cloned().fold(0.0f64, f64::max);
    let mut x = *x0;
    let mut n = 0u64;
    loop {
        let f = target.level(&x)?;
        let ptr_before = ptr;
        while ptr < k && f < radii[ptr] {
            hit_at[ptr] = Some(n);
            ptr += 1;
        }
        if ptr == k {
            break;
        }
        if ptr != ptr_before {
            // Only budgets of unresolved radii matter from here on.
            horizon = t_maxes[ptr..].iter().cloned().fold(0.0f64, f64::max);
        }
        if n as f64 >= horizon {
            break;
        }
        x = system.advance(&x, 1.0)?;
        n += 1;
    }
    Ok((0..k)
        .map(|j| match hit_at[j] {
            Some(m) if m as f64 <= t_maxes[j] => (m as f64, false),
            _ => (t_maxes[j], true),
        })
        .collect())
}

/// Coarse scan plus certified bisection for a flow with an arbitrary
/// Lipschitz level function. Advancement is exact from the start point,
/// so evaluation times carry no accumulation error.
fn generic_flow_hitting(
    system: &dyn System,
    x0: &PhasePoint,
    target: &TargetFamily,
    l: f64,
    t_max: f64,
) -> Result<(f64, bool)> {
    let v = system.velocity_bound() * target.lipschitz();
    let delta = l / (4.0 * v);
    let tol = (l * 1e-3 / v).min(delta);
    let eval = |t: f64| -> Result<f64> { target.level(&system.advance(x0, t)?) };

    let mut t = 0.0;
    let mut f_here = eval(0.0)?;
    loop {
        if f_here < l {
            return Ok((t, false));
        }
        if t >= t_max {
            return Ok((t_max, true));
        }
        let step = delta.max((f_here - l) / (2.0 * v)).min(t_max - t + tol);
        let f_next = eval(t + step)?;
        // No-miss test: the level cannot dip below l inside the window if
        // the chord midpoint bound stays above it.
        if 0.5 * (f_here + f_next) - 0.5 * v * step <= l {
            if let Some(s) = refine(&eval, t, t + step, f_here, f_next, l, v, tol)? {
                return Ok(if s <= t_max {
                    (s, false)
                } else {
                    (t_max, true)
                });
            }
        }
        t += step;
        f_here = f_next;
    }
}

#[allow(clippy::too_many_arguments)]
fn refine(
    eval: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    l: f64,
    v: f64,
    tol: f64,
) -> Result<Option<f64>> {
    if fa < l {
        return Ok(Some(a));
    }
    if 0.5 * (fa + fb) - 0.5 * v * (b - a) > l {
        return Ok(None);
    }
    if b - a < tol {
        return Ok(if fb < l { Some(b) } else { None });
    }
    let m = 0.5 * (a + b);
    let fm = eval(m)?;
    if let Some(s) = refine(eval, a, m, fa, fm, l, v, tol)? {
        return Ok(Some(s));
    }
    refine(eval, m, b, fm, fb, l, v, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::systems::{CatMap, LinearFlow, Rotation};
    use std::sync::Arc;

    #[test]
    fn starting_inside_gives_zero() {
        let sys = Rotation::custom(0.25).unwrap();
        let target = TargetFamily::torus_ball(&[0.5]).unwrap();
        let x0 = PhasePoint::coords(&[0.45]);
        let (tau, censored) = hitting_time(&sys, &x0, &target, 0.1, 100.0).unwrap();
        assert_eq!(tau, 0.0);
        assert!(!censored);
    }

    #[test]
    fn quarter_rotation_orbit_example() {
        // Orbit of 0 under x + 1/4: 0, 0.25, 0.5 -> hits the 0.1-ball
        // around 0.5 at step 2.
        let sys = Rotation::custom(0.25).unwrap();
        let target = TargetFamily::torus_ball(&[0.5]).unwrap();
        let x0 = PhasePoint::coords(&[0.0]);
        let (tau, censored) = hitting_time(&sys, &x0, &target, 0.1, 100.0).unwrap();
        assert_eq!(tau, 2.0);
        assert!(!censored);
    }

    #[test]
    fn cat_map_matches_exhaustive_enumeration() {
        // Independent oracle: a hand-rolled orbit loop with its own torus
        // metric, kept apart from the estimator's code path.
        let sys = CatMap;
        let target = TargetFamily::torus_ball(&[0.3, 0.7]).unwrap();
        let l = 1.0 / 64.0;
        let mut rng = RngStream::new(2024, 5);
        for _ in 0..10 {
            let x0 = sys.sample_invariant(&mut rng).unwrap();
            let (tau, censored) = hitting_time(&sys, &x0, &target, l, 200_000.0).unwrap();
            assert!(!censored);

            let s0 = x0.as_coords().unwrap().as_slice().to_vec();
            let (mut a, mut b) = (s0[0], s0[1]);
            let dist = |a: f64, b: f64| -> f64 {
                let dx = (a - 0.3f64).abs().min(1.0 - (a - 0.3f64).abs());
                let dy = (b - 0.7f64).abs().min(1.0 - (b - 0.7f64).abs());
                (dx * dx + dy * dy).sqrt()
            };
            let mut oracle = None;
            for n in 0..200_000u64 {
                if dist(a, b) < l {
                    oracle = Some(n as f64);
                    break;
                }
                let na = (2.0 * a + b).rem_euclid(1.0);
                let nb = (a + b).rem_euclid(1.0);
                a = na;
                b = nb;
            }
            assert_eq!(Some(tau), oracle);
        }
    }

    #[test]
    fn censoring_at_budget() {
        // Rational rotation never reaches a ball missing its finite orbit.
        let sys = Rotation::custom(0.5).unwrap();
        let target = TargetFamily::torus_ball(&[0.25]).unwrap();
        let x0 = PhasePoint::coords(&[0.0]);
        let (tau, censored) = hitting_time(&sys, &x0, &target, 0.05, 1000.0).unwrap();
        assert!(censored);
        assert_eq!(tau, 1000.0);
    }

    #[test]
    fn multi_radius_taus_are_monotone() {
        let sys = CatMap;
        let target = TargetFamily::torus_ball(&[0.3, 0.7]).unwrap();
        let radii = [0.25, 0.125, 0.0625, 0.03125];
        let t_maxes = [100_000.0; 4];
        let mut rng = RngStream::new(31337, 0);
        for _ in 0..20 {
            let x0 = sys.sample_invariant(&mut rng).unwrap();
            let taus = hitting_times_multi(&sys, &x0, &target, &radii, &t_maxes).unwrap();
            for w in taus.windows(2) {
                if !w[0].1 && !w[1].1 {
                    assert!(w[0].0 <= w[1].0, "tau increased for a larger target");
                }
            }
        }
    }

    #[test]
    fn linear_flow_detection_matches_fine_scan() {
        // Soundness of the coarse scan + bisection against a 25x finer
        // brute-force scan of the same (exact) orbit.
        let sys = LinearFlow::golden();
        let target = TargetFamily::torus_ball(&[0.37, 0.61]).unwrap();
        let l = 0.05;
        let mut rng = RngStream::new(555, 0);
        for trial in 0..10 {
            let x0 = sys.sample_invariant(&mut rng).unwrap();
            let (tau, censored) = hitting_time(&sys, &x0, &target, l, 500.0).unwrap();

            let fine = l / (4.0 * 25.0);
            let mut oracle = None;
            let mut t = 0.0;
            while t <= 500.0 {
                let f = target.level(&sys.advance(&x0, t).unwrap()).unwrap();
                if f < l {
                    oracle = Some(t);
                    break;
                }
                t += fine;
            }
            match (censored, oracle) {
                (false, Some(b)) => assert!(
                    tau <= b + 1e-9 && b - tau <= fine + l * 1e-3,
                    "trial {trial}: scan {tau} vs fine {b}"
                ),
                (true, None) => {}
                (c, o) => panic!("trial {trial}: censored={c} oracle={o:?} tau={tau}"),
            }
        }
    }

    #[test]
    fn invalid_radius_is_rejected() {
        let sys = CatMap;
        let target = TargetFamily::torus_ball(&[0.5, 0.5]).unwrap();
        let x0 = PhasePoint::coords(&[0.1, 0.1]);
        assert!(hitting_time(&sys, &x0, &target, 0.0, 10.0).is_err());
        assert!(hitting_time(&sys, &x0, &target, -0.5, 10.0).is_err());
    }

    #[test]
    fn synthetic_power_law_flow() {
        // A rigged flow whose hitting time of B_l is exactly l^{-2}:
        // state moves at unit speed, level(x) = x^{-1/2}.
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
        // level(x) = x^{-1/2} past x0 = 0.04, linearly capped below so the
        // declared Lipschitz constant 62.5 = sup |d/dx x^{-1/2}| is honest.
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
        let sys = LineFlow;
        for l in [0.5f64, 0.25, 0.125] {
            let expect = l.powi(-2);
            let (tau, censored) =
                hitting_time(&sys, &PhasePoint::coords(&[0.0]), &target, l, 1e5).unwrap();
            assert!(!censored);
            assert!(
                (tau - expect).abs() < l * 1e-2 + 1e-9,
                "l={l}: tau {tau} vs {expect}"
            );
        }
    }
}
