//! First-entry scans along geodesic orbits.
//!
//! Along a unit-speed geodesic, the distance to a fixed point w satisfies
//! cosh d(s) = A cosh s + B sinh s (the hyperbolic Pythagorean identity),
//! so within one scan window the exact minimum and the exact first
//! crossing of any radius are available in closed form from two endpoint
//! evaluations.
//!
//! The orbit is realized as a fixed-window pseudo-orbit: the group element
//! advances by WINDOW and is reduced into the fundamental domain once per
//! window. The flow is Anosov, so any two stepping schemes diverge after
//! t ~ 35; fixing the window schedule makes the realized orbit a pure
//! function of the start point, identical for every detector (scan,
//! fine-step oracle, excursion tracker) and every target radius.

use crate::error::Result;
use crate::geom::uhp;
use crate::hyperbolic::domain::FuchsianDomain;
use crate::hyperbolic::sasaki;
use crate::hyperbolic::tangent::UnitTangent;
use crate::hyperbolic::translates::TranslateCache;

/// Window length of the pseudo-orbit. Caches must cover the target radius
/// plus one window.
pub const WINDOW: f64 = 0.5;

/// Result of a bounded-horizon entry scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanOutcome {
    /// First-entry time into the target.
    Entry(f64),
    /// The orbit did not enter the target before the horizon.
    Timeout,
}

/// Cosh-linear window coefficients for one translate.
#[derive(Debug, Clone, Copy)]
struct CoshLine {
    a: f64,
    b: f64,
}

impl CoshLine {
    /// From endpoint values g(0) = a and g(w).
    #[inline]
    fn from_endpoints(g0: f64, gw: f64, w: f64) -> Self {
        CoshLine {
            a: g0,
            b: (gw - g0 * w.cosh()) / w.sinh(),
        }
    }

    /// The whole-geodesic minimum cosh(d_perp) = sqrt(A^2 - B^2) >= 1.
    #[inline]
    fn vertex_value(&self) -> f64 {
        (self.a * self.a - self.b * self.b).max(1.0).sqrt()
    }

    /// Parameter of the closest approach.
    #[inline]
    fn vertex_pos(&self) -> f64 {
        let x = (-self.b / self.a).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
        x.atanh()
    }

    /// Exact minimum of cosh d on [lo, hi].
    #[inline]
    fn min_on(&self, lo: f64, hi: f64) -> f64 {
        let s = self.vertex_pos();
        if s >= lo && s <= hi {
            self.vertex_value()
        } else {
            self.eval(lo).min(self.eval(hi))
        }
    }

    #[inline]
    fn eval(&self, s: f64) -> f64 {
        self.a * s.cosh() + self.b * s.sinh()
    }

    /// Earliest s in [0, hi] with cosh d(s) <= cosh_r, assuming the orbit
    /// starts outside (eval(0) > cosh_r).
    #[inline]
    fn first_crossing(&self, cosh_r: f64, hi: f64) -> Option<f64> {
        let m = self.vertex_value();
        if m > cosh_r {
            return None;
        }
        let entry = self.vertex_pos() - uhp::acosh(cosh_r / m);
        if entry >= -1e-12 && entry <= hi {
            Some(entry.max(0.0))
        } else {
            None
        }
    }
}

/// First entry of the geodesic orbit of `u0` into the base ball of radius
/// `r` around the cached target, scanning up to `t_max`.
///
/// Within each window the first crossing is exact to round-off; windows
/// whose start distance exceeds r + WINDOW cannot contain an entry (unit
/// speed) and skip the translate loop.
pub fn base_ball_first_entry(
    dom: &FuchsianDomain,
    cache: &TranslateCache,
    u0: &UnitTangent,
    r: f64,
    t_max: f64,
) -> Result<ScanOutcome> {
    let mut entries = [None];
    scan_multi(dom, cache, u0, &[r], t_max, &mut entries)?;
    Ok(match entries[0] {
        Some(t) => ScanOutcome::Entry(t),
        None => ScanOutcome::Timeout,
    })
}

/// First entries for several radii in one orbit pass (the radii share the
/// pseudo-orbit, so entry times are monotone in the radius by
/// construction). Used by cylinder-measure estimates and radius schedules.
pub fn base_ball_entries_multi(
    dom: &FuchsianDomain,
    cache: &TranslateCache,
    u0: &UnitTangent,
    radii: &[f64],
    horizon: f64,
) -> Result<Vec<Option<f64>>> {
    let mut entries = vec![None; radii.len()];
    scan_multi(dom, cache, u0, radii, horizon, &mut entries)?;
    Ok(entries)
}

fn scan_multi(
    dom: &FuchsianDomain,
    cache: &TranslateCache,
    u0: &UnitTangent,
    radii: &[f64],
    t_max: f64,
    entries: &mut [Option<f64>],
) -> Result<()> {
    assert_eq!(radii.len(), entries.len());
    let r_big = radii.iter().cloned().fold(0.0f64, f64::max);
    assert!(
        r_big + WINDOW < cache.coverage() + 1e-9,
        "radius {} + window {} needs cache coverage >= {}, have {}",
        r_big,
        WINDOW,
        r_big + WINDOW,
        cache.coverage()
    );
    let cosh_radii: Vec<f64> = radii.iter().map(|r| r.cosh()).collect();

    let (mut u, _) = dom.reduce(u0)?;
    let mut t = 0.0;

    // Start-inside check.
    let d0 = uhp::acosh(cache.min_cosh_distance(u.point()));
    let mut open = 0;
    for (k, &r) in radii.iter().enumerate() {
        if d0 <= r {
            entries[k] = Some(0.0);
        } else {
            open += 1;
        }
    }
    if open == 0 {
        return Ok(());
    }

    let prune = (r_big + WINDOW).cosh();
    while t < t_max {
        let z = u.point();
        let u_end = u.advance(WINDOW);

        if cache.min_cosh_distance(z) <= prune {
            let s_hi = WINDOW.min(t_max - t);
            let z_end = u_end.point();
            for tr in cache.translates() {
                let g0 = uhp::cosh_distance(z, tr.point);
                if g0 > prune {
                    continue;
                }
                let line =
                    CoshLine::from_endpoints(g0, uhp::cosh_distance(z_end, tr.point), WINDOW);
                for (k, &cr) in cosh_radii.iter().enumerate() {
                    if let Some(prev) = entries[k] {
                        if prev <= t {
                            continue;
                        }
                    }
                    if let Some(s) = line.first_crossing(cr, s_hi) {
                        let cand = t + s;
                        if entries[k].is_none_or(|e| cand < e) {
                            entries[k] = Some(cand);
                        }
                    }
                }
            }
            if entries.iter().all(|e| e.is_some()) {
                return Ok(());
            }
        }

        t += WINDOW;
        u = dom.reduce(&u_end)?.0;
    }
    Ok(())
}

/// First entry into the surrogate-Sasaki ball of radius `r` around the
/// cached target tangent.
///
/// The surrogate level moves at speed < 2 along orbits; windows that start
/// farther than r + 2 WINDOW are skipped, candidate windows are refined by
/// a certified bisection that only excludes a subinterval when the
/// Lipschitz bound proves the level stays above r.
pub fn sasaki_ball_first_entry(
    dom: &FuchsianDomain,
    cache: &TranslateCache,
    u0: &UnitTangent,
    r: f64,
    t_max: f64,
) -> Result<ScanOutcome> {
    const V: f64 = 2.0;
    assert!(
        r + WINDOW < cache.coverage() + 1e-9,
        "radius {} + window {} needs cache coverage >= {}, have {}",
        r,
        WINDOW,
        r + WINDOW,
        cache.coverage()
    );
    let tol = (r * 5e-4).max(1e-9);

    let (mut u, _) = dom.reduce(u0)?;
    let mut t = 0.0;
    let mut g_here = sasaki_level(cache, &u);
    loop {
        if g_here <= r {
            return Ok(if t <= t_max {
                ScanOutcome::Entry(t)
            } else {
                ScanOutcome::Timeout
            });
        }
        if t >= t_max {
            return Ok(ScanOutcome::Timeout);
        }
        let u_end = u.advance(WINDOW);
        if g_here - r <= V * WINDOW {
            let g_end = sasaki_level(cache, &u_end);
            let s_hi = WINDOW.min(t_max - t);
            if let Some(s) = refine_entry(cache, &u, 0.0, WINDOW, g_here, g_end, r, tol) {
                if s <= s_hi {
                    return Ok(ScanOutcome::Entry(t + s));
                }
            }
            g_here = g_end;
        } else {
            // Too far to enter within this window; carry a safe bound
            // instead of re-evaluating the level.
            g_here -= V * WINDOW;
        }
        t += WINDOW;
        u = dom.reduce(&u_end)?.0;
    }
}

/// Certified recursive search for the earliest entry on [a, b]: a
/// subinterval is excluded only when the 2-Lipschitz bound proves the
/// level stays above r on it.
#[allow(clippy::too_many_arguments)]
fn refine_entry(
    cache: &TranslateCache,
    u: &UnitTangent,
    a: f64,
    b: f64,
    ga: f64,
    gb: f64,
    r: f64,
    tol: f64,
) -> Option<f64> {
    if ga <= r {
        return Some(a);
    }
    // Dip bound for speed-2 levels: min over [a,b] >= (ga + gb)/2 - (b-a).
    if 0.5 * (ga + gb) - (b - a) > r {
        return None;
    }
    if b - a < tol {
        return if gb <= r { Some(b) } else { None };
    }
    let m = 0.5 * (a + b);
    let gm = sasaki_level(cache, &u.advance(m));
    refine_entry(cache, u, a, m, ga, gm, r, tol)
        .or_else(|| refine_entry(cache, u, m, b, gm, gb, r, tol))
}

/// Surrogate-Sasaki distance from `u` to the nearest translate of the
/// cached target tangent.
pub fn sasaki_level(cache: &TranslateCache, u: &UnitTangent) -> f64 {
    let z = u.point();
    let mut best = f64::INFINITY;
    for tr in cache.translates() {
        // Base distance alone lower-bounds the surrogate.
        let base_cosh = uhp::cosh_distance(z, tr.point);
        if uhp::acosh(base_cosh) >= best {
            continue;
        }
        let q = UnitTangent::from_position(tr.point, tr.theta);
        let d = sasaki::sasaki_distance(&q, u);
        if d < best {
            best = d;
        }
    }
    best
}

/// Running minimum of the base distance to the cached target along the
/// orbit, with exact closed-form pass minima, reported at the requested
/// grid times; also the running maximum over interior local minima of
/// -log d / log t.
pub struct RunMinCurve {
    /// (t, running min d_t) at each grid time.
    pub at_grid: Vec<(f64, f64)>,
    /// Running max over local-minimum events of -log d / log t, at grid.
    pub local_min_stat: Vec<f64>,
}

pub fn run_min_curve(
    dom: &FuchsianDomain,
    cache: &TranslateCache,
    u0: &UnitTangent,
    t_grid: &[f64],
) -> Result<RunMinCurve> {
    let (mut u, _) = dom.reduce(u0)?;
    let mut t = 0.0;
    let mut run_min_cosh = cache.min_cosh_distance(u.point());
    let mut stat: f64 = 0.0;
    let mut at_grid = Vec::with_capacity(t_grid.len());
    let mut local_min_stat = Vec::with_capacity(t_grid.len());
    let mut grid_iter = t_grid.iter().peekable();
    let mut lines: Vec<CoshLine> = Vec::new();

    while let Some(&&t_next) = grid_iter.peek() {
        if t >= t_next {
            at_grid.push((t_next, uhp::acosh(run_min_cosh)));
            local_min_stat.push(stat);
            grid_iter.next();
            continue;
        }
        let z = u.point();
        let u_end = u.advance(WINDOW);

        // Record-improving translates must currently be within the running
        // minimum plus one window; the reference-distance annulus rules
        // out most of the cache without any distance evaluation.
        let d_run = uhp::acosh(run_min_cosh);
        let prune = (d_run + WINDOW).cosh();
        lines.clear();
        let dz_ref = uhp::distance_unchecked(z, cache.z_ref());
        let band = cache.annulus(dz_ref, d_run + WINDOW);
        if !band.is_empty() {
            let z_end = u_end.point();
            for tr in &cache.translates()[band] {
                let g0 = uhp::cosh_distance(z, tr.point);
                if g0 <= prune {
                    lines.push(CoshLine::from_endpoints(
                        g0,
                        uhp::cosh_distance(z_end, tr.point),
                        WINDOW,
                    ));
                }
            }
        }

        // Walk the window in segments split at grid times so every grid
        // value is exact.
        let mut s_prev = 0.0;
        loop {
            let split = grid_iter
                .peek()
                .map(|&&g| g - t)
                .filter(|&s| s <= WINDOW)
                .unwrap_or(WINDOW);
            let s_hi = split.min(WINDOW);
            if s_hi > s_prev {
                for line in &lines {
                    let m = line.min_on(s_prev, s_hi);
                    if m < run_min_cosh {
                        run_min_cosh = m;
                        let s = line.vertex_pos();
                        if s > s_prev && s < s_hi {
                            let d = uhp::acosh(m);
                            let time = t + s;
                            if d > 0.0 && time > 1.0 {
                                stat = stat.max(-d.ln() / time.ln());
                            }
                        }
                    }
                }
            }
            if split < WINDOW {
                at_grid.push((t + split, uhp::acosh(run_min_cosh)));
                local_min_stat.push(stat);
                grid_iter.next();
                s_prev = split;
            } else {
                break;
            }
        }

        t += WINDOW;
        u = dom.reduce(&u_end)?.0;
    }
    Ok(RunMinCurve {
        at_grid,
        local_min_stat,
    })
}

/// Running maximum of the base distance to the cached target (cusp
/// excursions), sampled at window endpoints; the sampling error is at most
/// half a window at unit speed.
pub fn run_max_curve(
    dom: &FuchsianDomain,
    cache: &TranslateCache,
    u0: &UnitTangent,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let (mut u, _) = dom.reduce(u0)?;
    let mut t = 0.0;
    let mut run_max = cache.min_distance(u.point());
    let mut out = Vec::with_capacity(t_grid.len());
    let mut grid_iter = t_grid.iter().peekable();
    while let Some(&&t_next) = grid_iter.peek() {
        if t >= t_next {
            out.push((t_next, run_max));
            grid_iter.next();
            continue;
        }
        let u_end = u.advance(WINDOW);
        t += WINDOW;
        u = dom.reduce(&u_end)?.0;
        run_max = run_max.max(cache.min_distance(u.point()));
    }
    Ok(out)
}
