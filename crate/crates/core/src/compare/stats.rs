//! Boxplot-style distribution summaries.

use serde::Serialize;

use super::CompareError;

/// Name of the quartile convention, recorded in report metadata.
pub const QUARTILE_METHOD: &str = "linear interpolation between order statistics (inclusive)";

/// Whisker fences sit this many IQRs beyond the quartiles.
pub const FENCE_IQR_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionSummary {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub iqr: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    /// Values outside the fences, ascending.
    pub outliers: Vec<f64>,
}

/// Quantile `p` of ascending `sorted` by linear interpolation: position
/// `(n - 1) p` between neighbouring order statistics.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

pub fn median(values: &[f64]) -> Result<f64, CompareError> {
    Ok(summarize_distribution(values)?.median)
}

pub fn summarize_distribution(values: &[f64]) -> Result<DistributionSummary, CompareError> {
    if values.is_empty() {
        return Err(CompareError::EmptyDistribution);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(CompareError::NonFiniteValue(bad));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);

    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let lower_fence = q1 - FENCE_IQR_FACTOR * iqr;
    let upper_fence = q3 + FENCE_IQR_FACTOR * iqr;
    let outliers = sorted
        .iter()
        .copied()
        .filter(|&v| v < lower_fence || v > upper_fence)
        .collect();

    Ok(DistributionSummary {
        n: sorted.len(),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        min: sorted[0],
        q1,
        median,
        q3,
        max: sorted[sorted.len() - 1],
        iqr,
        lower_fence,
        upper_fence,
        outliers,
    })
}
