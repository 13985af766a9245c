use serde::Serialize;

use super::CriticalRecord;
use crate::error::{usage, Result};

/// Least-squares fit of `d = a + b · ln m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
    pub model: &'static str,
    pub points: usize,
    /// Set when the dimensions have zero variance and R² is undefined; the
    /// reported R² is then 0.
    pub degenerate: bool,
}

pub const LOG_LINEAR_MODEL: &str = "d = a + b*ln(m)";

/// Cubic fit of the critical universe size against dimension reported for
/// free-embedding optimization at k = 2.
pub fn baseline_curve(d: f64) -> f64 {
    -10.5322 + 4.0309 * d + 0.0520 * d * d + 0.0037 * d * d * d
}

/// Fits the records that have a critical dimension.
pub fn fit_log_linear(records: &[CriticalRecord]) -> Result<FitResult> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| r.critical_dim.map(|d| (r.m as f64, d as f64)))
        .collect();
    fit_log_linear_points(&points)
}

/// Fits `(m, d)` pairs.
pub fn fit_log_linear_points(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(usage(format!(
            "log-linear fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(m, _)| m.is_nan() || *m <= 0.0) {
        return Err(usage("universe sizes must be positive"));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(m, _)| m.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, d)| *d).collect();
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let syy: f64 = ys.iter().map(|y| (y - ym).powi(2)).sum();
    if sxx == 0.0 {
        return Err(usage(
            "log-linear fit needs at least two distinct universe sizes",
        ));
    }
    let b = sxy / sxx;
    let a = ym - b * xm;
    let (r_squared, degenerate) = if syy == 0.0 {
        (0.0, true)
    } else {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - a - b * x).powi(2))
            .sum();
        ((1.0 - ss_res / syy).clamp(0.0, 1.0), false)
    };
    Ok(FitResult {
        a,
        b,
        r_squared,
        model: LOG_LINEAR_MODEL,
        points: points.len(),
        degenerate,
    })
}
