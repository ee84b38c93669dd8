use serde::{Deserialize, Serialize};

use super::scan::ScanRow;
use crate::error::{domain, Result};

/// Least-squares fit of `variance ≈ slope · log(2 + ξ) + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundFit {
    pub slope: f64,
    pub intercept: f64,
    /// `max variance / log(2 + ξ)` over the rows.
    pub max_ratio: f64,
    pub residuals: Vec<f64>,
}

pub fn fit_log_bound(rows: &[ScanRow]) -> Result<BoundFit> {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.xi, r.variance)).collect();
    fit_log_points(&points)
}

/// Same fit on raw `(ξ, variance)` pairs.
pub fn fit_log_points(points: &[(f64, f64)]) -> Result<BoundFit> {
    if points.len() < 3 {
        return Err(domain!("need at least 3 rows, got {}", points.len()));
    }
    if points.iter().any(|&(xi, v)| !(xi >= 0.0 && xi.is_finite() && v.is_finite())) {
        return Err(domain!("scale and variance must be finite with xi >= 0"));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(xi, _)| (2.0 + xi).ln()).collect();
    let x_bar = xs.iter().sum::<f64>() / k;
    let y_bar = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - x_bar).powi(2)).sum();
    if sxx <= 1e-12 * xs.iter().map(|x| x * x).sum::<f64>() {
        return Err(domain!("degenerate design: all scales equal"));
    }
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - x_bar) * (p.1 - y_bar)).sum();
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let residuals = xs.iter().zip(points).map(|(x, p)| p.1 - (slope * x + intercept)).collect();
    let max_ratio = xs.iter().zip(points).map(|(x, p)| p.1 / x).fold(0.0, f64::max);
    Ok(BoundFit {
        slope,
        intercept,
        max_ratio,
        residuals,
    })
}
