//! Correlation curves and decay classification for bounded Lipschitz
//! observables.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{PhasePoint, System, TimeKind};
use crate::error::{Error, Result};
use crate::estimators::fit::{loglog_fit, LinearFit};
use crate::rng::RngStream;

/// A named bounded observable on phase space.
#[derive(Clone)]
pub struct Observable {
    pub name: &'static str,
    f: Arc<dyn Fn(&PhasePoint) -> f64 + Send + Sync>,
}

impl Observable {
    pub fn new(name: &'static str, f: Arc<dyn Fn(&PhasePoint) -> f64 + Send + Sync>) -> Self {
        Observable { name, f }
    }

    #[inline]
    pub fn eval(&self, x: &PhasePoint) -> f64 {
        (self.f)(x)
    }

    /// Constant 1 (degenerate on purpose; correlations vanish).
    pub fn constant() -> Self {
        Self::new("const", Arc::new(|_| 1.0))
    }

    /// First coordinate.
    pub fn coord_x() -> Self {
        Self::new(
            "coord-x",
            Arc::new(|p| p.as_coords().map(|c| c.as_slice()[0]).unwrap_or(0.0)),
        )
    }

    /// cos(2 pi x) of the first coordinate.
    pub fn cos_x() -> Self {
        Self::new(
            "cos-x",
            Arc::new(|p| {
                p.as_coords()
                    .map(|c| (std::f64::consts::TAU * c.as_slice()[0]).cos())
                    .unwrap_or(0.0)
            }),
        )
    }

    /// Centered triangle wave of the first coordinate: Lipschitz with full
    /// odd-harmonic spectrum; oscillates without decay under rotations.
    pub fn tri_x() -> Self {
        Self::new(
            "tri-x",
            Arc::new(|p| {
                p.as_coords()
                    .map(|c| {
                        let x = c.as_slice()[0];
                        1.0 - 4.0 * (x - 0.5).abs()
                    })
                    .unwrap_or(0.0)
            }),
        )
    }

    /// Mode sum along the unstable lattice orbit of the cat map:
    /// f = sum_j 2^{-j} cos(2 pi k_j . x) with k_0 = (1,1) and
    /// k_{j+1} = A k_j. One application of the map shifts the cascade by
    /// one mode, so the autocorrelation is exactly geometric with ratio
    /// 1/2 across the grid — a clean exponential-decay probe. Plain
    /// single-mode observables are useless here: the map permutes the
    /// lattice and their correlations vanish identically after one step.
    pub fn cat_mode_cascade() -> Self {
        const DEPTH: usize = 7;
        let mut modes = Vec::with_capacity(DEPTH);
        let (mut a, mut b) = (1.0f64, 1.0f64);
        for j in 0..DEPTH {
            modes.push((a, b, 0.5f64.powi(j as i32)));
            let (na, nb) = (2.0 * a + b, a + b);
            a = na;
            b = nb;
        }
        Self::new(
            "cat-mode-cascade",
            Arc::new(move |p| {
                let c = match p.as_coords() {
                    Ok(c) => c,
                    Err(_) => return 0.0,
                };
                let s = c.as_slice();
                modes
                    .iter()
                    .map(|&(kx, ky, w)| w * (std::f64::consts::TAU * (kx * s[0] + ky * s[1])).cos())
                    .sum()
            }),
        )
    }

    /// Catalogue of built-in observables, keyed by name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "const" => Some(Self::constant()),
            "coord-x" => Some(Self::coord_x()),
            "cos-x" => Some(Self::cos_x()),
            "tri-x" => Some(Self::tri_x()),
            "cat-mode-cascade" => Some(Self::cat_mode_cascade()),
            _ => None,
        }
    }

    pub fn catalogue_names() -> Vec<&'static str> {
        vec!["cat-mode-cascade", "const", "coord-x", "cos-x", "tri-x"]
    }
}

/// Decay classification of a correlation curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Decay {
    Exponential {
        rate: f64,
    },
    Polynomial {
        power: f64,
    },
    None,
    /// Fewer than 4 points rise above the noise floor.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationCurve {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Monte Carlo standard error per grid point.
    pub noise_floor: Vec<f64>,
    pub classification: Decay,
    pub exp_fit: Option<LinearFit>,
    pub poly_fit: Option<LinearFit>,
    pub supra_noise_points: usize,
}

const CHUNK: u64 = 2048;
/// A point is usable for classification above 3 Monte Carlo sigma.
const SUPRA: f64 = 3.0;
/// Minimal fit quality to call a decay trend at all.
const DECAY_R2: f64 = 0.6;

/// Ensemble estimate of C(t) = E[f g(Phi^t)] - E[f] E[g] over the t grid.
pub fn correlation_curve(
    system: &dyn System,
    f: &Observable,
    g: &Observable,
    t_grid: &[f64],
    n: u64,
    rng: &RngStream,
) -> Result<CorrelationCurve> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    let mut sorted = t_grid.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if system.time_kind() == TimeKind::Map && sorted.iter().any(|t| t.fract() != 0.0) {
        return Err(Error::InvalidArgument(
            "map correlation grids must be integer times".into(),
        ));
    }

    let k = sorted.len();
    // Per-chunk accumulators: sums of f, g(t), f*g(t), (f*g(t))^2.
    type Sums = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<Result<Sums>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut stream = rng.substream(c);
            let mut sum_f = vec![0.0; k];
            let mut sum_g = vec![0.0; k];
            let mut sum_fg = vec![0.0; k];
            let mut sum_fg2 = vec![0.0; k];
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            for _ in lo..hi {
                let x0 = system.sample_invariant(&mut stream)?;
                let f0 = f.eval(&x0);
                if !f0.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "observable {} produced a non-finite value",
                        f.name
                    )));
                }
                let mut x = x0;
                let mut t_prev = 0.0;
                for (j, &t) in sorted.iter().enumerate() {
                    x = system.advance(&x, t - t_prev)?;
                    t_prev = t;
                    let gt = g.eval(&x);
                    let fg = f0 * gt;
                    sum_f[j] += f0;
                    sum_g[j] += gt;
                    sum_fg[j] += fg;
                    sum_fg2[j] += fg * fg;
                }
            }
            Ok((sum_f, sum_g, sum_fg, sum_fg2))
        })
        .collect();

    let mut sum_f = vec![0.0; k];
    let mut sum_g = vec![0.0; k];
    let mut sum_fg = vec![0.0; k];
    let mut sum_fg2 = vec![0.0; k];
    for p in partials {
        let (a, b, c, d) = p?;
        for j in 0..k {
            sum_f[j] += a[j];
            sum_g[j] += b[j];
            sum_fg[j] += c[j];
            sum_fg2[j] += d[j];
        }
    }

    let nf = n as f64;
    let mut values = Vec::with_capacity(k);
    let mut noise = Vec::with_capacity(k);
    for j in 0..k {
        let mean_fg = sum_fg[j] / nf;
        let c = mean_fg - (sum_f[j] / nf) * (sum_g[j] / nf);
        let var_fg = (sum_fg2[j] / nf - mean_fg * mean_fg).max(0.0);
        values.push(c);
        noise.push((var_fg / nf).sqrt());
    }

    let (classification, exp_fit, poly_fit, supra) = classify(&sorted, &values, &noise);
    Ok(CorrelationCurve {
        t_grid: sorted,
        values,
        noise_floor: noise,
        classification,
        exp_fit,
        poly_fit,
        supra_noise_points: supra,
    })
}

fn classify(
    t: &[f64],
    c: &[f64],
    noise: &[f64],
) -> (Decay, Option<LinearFit>, Option<LinearFit>, usize) {
    let usable: Vec<usize> = (0..t.len())
        .filter(|&j| c[j].abs() > SUPRA * noise[j])
        .collect();
    if usable.len() < 4 {
        return (Decay::Inconclusive, None, None, usable.len());
    }
    let exp_pts: Vec<(f64, f64)> = usable.iter().map(|&j| (t[j], c[j].abs().ln())).collect();
    let exp_fit = loglog_fit(&exp_pts, None).ok();
    let poly_pts: Vec<(f64, f64)> = usable
        .iter()
        .filter(|&&j| t[j] > 0.0)
        .map(|&j| (t[j].ln(), c[j].abs().ln()))
        .collect();
    let poly_fit = if poly_pts.len() >= 3 {
        loglog_fit(&poly_pts, None).ok()
    } else {
        None
    };

    let good = |f: &Option<LinearFit>| -> Option<f64> {
        f.as_ref()
            .filter(|f| f.slope < 0.0 && f.r_squared >= DECAY_R2)
            .map(|f| f.r_squared)
    };
    let decision = match (good(&exp_fit), good(&poly_fit)) {
        (Some(re), Some(rp)) => {
            if re >= rp {
                Decay::Exponential {
                    rate: -exp_fit.as_ref().unwrap().slope,
                }
            } else {
                Decay::Polynomial {
                    power: -poly_fit.as_ref().unwrap().slope,
                }
            }
        }
        (Some(_), None) => Decay::Exponential {
            rate: -exp_fit.as_ref().unwrap().slope,
        },
        (None, Some(_)) => Decay::Polynomial {
            power: -poly_fit.as_ref().unwrap().slope,
        },
        (None, None) => Decay::None,
    };
    (decision, exp_fit, poly_fit, usable.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{CatMap, Rotation};

    #[test]
    fn constant_observable_has_zero_correlation() {
        let sys = CatMap;
        let f = Observable::constant();
        let rng = RngStream::new(100, 0);
        let grid: Vec<f64> = (0..6).map(|k| k as f64).collect();
        let curve = correlation_curve(&sys, &f, &f, &grid, 5000, &rng).unwrap();
        for (j, &c) in curve.values.iter().enumerate() {
            assert!(
                c.abs() <= 3.0 * curve.noise_floor[j] + 1e-12,
                "C({}) = {c}",
                curve.t_grid[j]
            );
        }
        assert_eq!(curve.classification, Decay::Inconclusive);
    }

    #[test]
    fn zero_lag_is_the_variance() {
        let sys = CatMap;
        let f = Observable::tri_x();
        let rng = RngStream::new(101, 0);
        let curve = correlation_curve(&sys, &f, &f, &[0.0], 100_000, &rng).unwrap();
        // Var(tri) over Lebesgue = 1/3.
        let expect = 1.0 / 3.0;
        assert!(
            (curve.values[0] - expect).abs() < 3.0 * curve.noise_floor[0] + 1e-3,
            "C(0) = {} vs {expect}",
            curve.values[0]
        );
    }

    #[test]
    fn cat_map_cascade_is_exponential() {
        let sys = CatMap;
        let f = Observable::cat_mode_cascade();
        let rng = RngStream::new(102, 0);
        let grid: Vec<f64> = (0..7).map(|k| k as f64).collect();
        let curve = correlation_curve(&sys, &f, &f, &grid, 2_000_000, &rng).unwrap();
        match curve.classification {
            Decay::Exponential { rate } => {
                // Geometric ratio 1/2 per step.
                assert!((rate - std::f64::consts::LN_2).abs() < 0.08, "rate {rate}");
            }
            other => panic!("expected exponential, got {other:?}"),
        }
        assert!(curve.exp_fit.as_ref().unwrap().r_squared >= 0.95);
        assert!(curve.supra_noise_points >= 5);
    }

    #[test]
    fn golden_rotation_does_not_decay() {
        let sys = Rotation::golden();
        let f = Observable::tri_x();
        let rng = RngStream::new(103, 0);
        let grid: Vec<f64> = (0..24).map(|k| k as f64).collect();
        let curve = correlation_curve(&sys, &f, &f, &grid, 200_000, &rng).unwrap();
        assert_eq!(curve.classification, Decay::None, "{:?}", curve);
    }

    #[test]
    fn map_grid_must_be_integer() {
        let sys = CatMap;
        let f = Observable::tri_x();
        let rng = RngStream::new(104, 0);
        assert!(correlation_curve(&sys, &f, &f, &[0.5], 2000, &rng).is_err());
    }
}
