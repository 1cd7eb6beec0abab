//! Least-squares fits and small order statistics. Every asymptotic
//! "lim log/log" in the estimators is realized as one of these finite
//! regressions.

use serde::Serialize;

use crate::error::{Error, Result};

/// Weighted least-squares line fit.
#[derive(Debug, Clone, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope, from residual variance.
    pub stderr: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Weighted least squares of y against x. Needs >= 3 points with
/// non-degenerate x spread.
pub fn loglog_fit(points: &[(f64, f64)], weights: Option<&[f64]>) -> Result<LinearFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 points for a fit, got {n}"
        )));
    }
    if let Some(w) = weights {
        if w.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} points",
                w.len(),
                n
            )));
        }
        if w.iter()
            .any(|&x| x.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || !x.is_finite())
        {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InsufficientData("non-finite fit input".into()));
    }

    let w_of = |i: usize| weights.map_or(1.0, |w| w[i]);
    let w_sum: f64 = (0..n).map(w_of).sum();
    let x_bar: f64 = (0..n).map(|i| w_of(i) * points[i].0).sum::<f64>() / w_sum;
    let y_bar: f64 = (0..n).map(|i| w_of(i) * points[i].1).sum::<f64>() / w_sum;

    let sxx: f64 = (0..n)
        .map(|i| w_of(i) * (points[i].0 - x_bar).powi(2))
        .sum();
    if sxx < 1e-14 * (1.0 + x_bar * x_bar) {
        return Err(Error::InsufficientData(
            "fit abscissae are degenerate".into(),
        ));
    }
    let sxy: f64 = (0..n)
        .map(|i| w_of(i) * (points[i].0 - x_bar) * (points[i].1 - y_bar))
        .sum();

    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;

    let ss_res: f64 = (0..n)
        .map(|i| {
            let r = points[i].1 - (slope * points[i].0 + intercept);
            w_of(i) * r * r
        })
        .sum();
    let ss_tot: f64 = (0..n)
        .map(|i| w_of(i) * (points[i].1 - y_bar).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    // Residual variance with n - 2 degrees of freedom.
    let sigma2 = ss_res / (n as f64 - 2.0) / (w_sum / n as f64);
    let stderr = (sigma2 / sxx).sqrt();

    Ok(LinearFit {
        slope,
        intercept,
        stderr,
        r_squared,
        n,
    })
}

/// Median of a sample (average of the middle pair for even sizes).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Interquartile range.
pub fn iqr(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| -> f64 {
        let idx = p * (v.len() - 1) as f64;
        let lo = idx.floor() as usize;
        let hi = idx.ceil() as usize;
        let frac = idx - lo as f64;
        v[lo] * (1.0 - frac) + v[hi] * frac
    };
    q(0.75) - q(0.25)
}
