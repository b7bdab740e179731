use crate::error::{Error, Result};

/// Box-plot statistics of an ensemble.
///
/// Quartiles use linear interpolation between order statistics at position
/// `p (n - 1)` of the sorted sample. The whiskers are `q1 - 1.5 IQR` and
/// `q3 + 1.5 IQR`; values strictly outside them are outliers.
#[derive(Debug, Clone, PartialEq)]
pub struct FiveNumberSummary {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub lo: f64,
    pub hi: f64,
    pub outliers: Vec<f64>,
}

impl FiveNumberSummary {
    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let below = pos.floor() as usize;
    let above = pos.ceil() as usize;
    let frac = pos - below as f64;
    sorted[below] + (sorted[above] - sorted[below]) * frac
}

pub fn summary_stats(values: &[f64]) -> Result<FiveNumberSummary> {
    if values.is_empty() {
        return Err(Error::Config("cannot summarize an empty sample".into()));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Config("sample contains NaN".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let lo = q1 - 1.5 * iqr;
    let hi = q3 + 1.5 * iqr;
    let outliers = sorted.iter().copied().filter(|&v| v < lo || v > hi).collect();
    Ok(FiveNumberSummary { q1, median, q3, lo, hi, outliers })
}
