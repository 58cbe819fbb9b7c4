use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// A named statistic compared against its threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub sizes: Vec<usize>,
}

impl TestReport {
    /// Passes iff `value <= threshold`.
    pub fn at_most(statistic: impl Into<String>, value: f64, threshold: f64, sizes: Vec<usize>) -> Self {
        Self {
            statistic: statistic.into(),
            value,
            threshold,
            pass: value <= threshold,
            sizes,
        }
    }
}

/// Sup-distance between the empirical CDFs of two samples. NaNs are rejected.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::InvalidArgument("both samples must be nonempty".into()));
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("samples contain NaN".into()));
    }
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (m, n) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / n).abs());
    }
    Ok(d)
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    // below 0.2 the survival is 1 to double precision and the series converges slowly
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Quantile of the two-sample KS distance under the null at `level`
/// (e.g. 0.999), using the asymptotic law with Stephens' small-sample
/// correction on the effective size `mn / (m + n)`.
pub fn ks_null_quantile(m: usize, n: usize, level: f64) -> Result<f64> {
    if m == 0 || n == 0 || !(0.0 < level && level < 1.0) {
        return Err(Error::InvalidArgument("sizes must be positive and level in (0, 1)".into()));
    }
    let alpha = 1.0 - level;
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_survival(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let ne = (m * n) as f64 / (m + n) as f64;
    let root = ne.sqrt();
    Ok(lambda / (root + 0.12 + 0.11 / root))
}

/// Wilson score interval for `successes` out of `trials` at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Fraction of values with `|rho - 1| >= eps`, with a 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exceedance {
    pub eps: f64,
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub count: usize,
    pub total: usize,
}

pub fn exceedance_of(rhos: &[f64], eps: f64) -> Result<Exceedance> {
    if rhos.is_empty() {
        return Err(Error::InvalidArgument("no trials to estimate an exceedance from".into()));
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {eps}")));
    }
    let count = rhos.iter().filter(|&&r| (r - 1.0).abs() >= eps).count();
    let (ci_low, ci_high) = wilson_interval(count, rhos.len());
    Ok(Exceedance {
        eps,
        value: count as f64 / rhos.len() as f64,
        ci_low,
        ci_high,
        count,
        total: rhos.len(),
    })
}

/// Median; the mean of the two central values for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) })
}
