use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::stats::{ks_null_quantile, ks_two_sample, TestReport};
use super::trial_seed;
use crate::ensemble::{sample_matrix, EntryDistribution, SeedSpec};
use crate::error::{Error, Result};
use crate::limitlaw::{eval_limit, required_order, sample_x, TAIL_TOL};
use crate::matrix::ComplexMatrix;
use crate::recpoly::{eval_qn_det, qn_coeffs};

/// Fewest trials per side accepted for a distributional comparison.
pub const MIN_TRIALS: usize = 200;

/// Null quantile used as the KS acceptance threshold.
pub const KS_LEVEL: f64 = 0.999;

/// Up to this dimension `q_n` is expanded through the Newton recurrence on
/// traces (with the degree check); above it, `q_n(z)` is one LU determinant.
pub const NEWTON_MAX_N: usize = 64;

/// Salt separating the limit-sampler streams from the matrix streams.
const LIMIT_STREAM: u64 = 0x006c_696d_6974;

/// `q_n` of `A` (unnormalized) at every grid point.
pub fn finite_qn_values(a: &ComplexMatrix, grid: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.dim();
    if n <= NEWTON_MAX_N {
        let series = qn_coeffs(a, n + 2)?;
        Ok(grid.iter().map(|&z| series.eval(z)).collect())
    } else {
        Ok(grid.iter().map(|&z| eval_qn_det(a, z)).collect())
    }
}

/// One draw of `kappa exp(-F)` at every grid point.
pub fn limit_values(tau: Complex64, terms: usize, seed: SeedSpec, grid: &[Complex64]) -> Result<Vec<Complex64>> {
    let sample = sample_x(tau, terms, seed)?;
    grid.iter().map(|&z| eval_limit(&sample, z)).collect()
}

/// Truncation order for the grid: the tail rule at its outermost point.
pub fn terms_for_grid(grid: &[Complex64]) -> Result<usize> {
    let r = grid.iter().map(|z| z.norm()).fold(0.0, f64::max);
    required_order(r, TAIL_TOL)
}

/// The three KS comparisons at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub z: Complex64,
    pub re: TestReport,
    pub im: TestReport,
    pub modulus: TestReport,
}

impl PointReport {
    pub fn max_distance(&self) -> f64 {
        self.re.value.max(self.im.value).max(self.modulus.value)
    }
}

/// Marginal KS comparisons of finite-n `q_n` against the limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QnReport {
    pub dist: String,
    pub n: usize,
    pub tau: Complex64,
    pub terms: usize,
    pub trials: usize,
    pub points: Vec<PointReport>,
    pub min_modulus: TestReport,
    pub pass: bool,
}

impl QnReport {
    /// Largest KS distance over the Re, Im and modulus marginals of all points.
    pub fn max_distance(&self) -> f64 {
        self.points.iter().map(PointReport::max_distance).fold(0.0, f64::max)
    }
}

/// KS distances between two samples of grid values (one row per trial).
pub fn compare_samples(
    xs: &[Vec<Complex64>],
    ys: &[Vec<Complex64>],
    grid: &[Complex64],
) -> Result<(Vec<PointReport>, TestReport)> {
    let sizes = vec![xs.len(), ys.len()];
    let threshold = ks_null_quantile(xs.len(), ys.len(), KS_LEVEL)?;
    let column = |rows: &[Vec<Complex64>], i: usize, f: fn(Complex64) -> f64| -> Vec<f64> {
        rows.iter().map(|r| f(r[i])).collect()
    };
    let ks = |name: String, f: fn(Complex64) -> f64, i: usize| -> Result<TestReport> {
        let d = ks_two_sample(&column(xs, i, f), &column(ys, i, f))?;
        Ok(TestReport::at_most(name, d, threshold, sizes.clone()))
    };
    let points = grid
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            Ok(PointReport {
                z,
                re: ks(format!("ks_re[{z}]"), |w| w.re, i)?,
                im: ks(format!("ks_im[{z}]"), |w| w.im, i)?,
                modulus: ks(format!("ks_abs[{z}]"), |w| w.norm(), i)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let minmod = |rows: &[Vec<Complex64>]| -> Vec<f64> {
        rows.iter()
            .map(|r| r.iter().map(|w| w.norm()).fold(f64::INFINITY, f64::min))
            .collect()
    };
    let d = ks_two_sample(&minmod(xs), &minmod(ys))?;
    Ok((points, TestReport::at_most("ks_min_modulus", d, threshold, sizes)))
}

/// `trials` draws of the limit at the grid, from master seed `master`.
pub fn limit_samples(
    tau: Complex64,
    terms: usize,
    master: u64,
    trials: usize,
    grid: &[Complex64],
) -> Result<Vec<Vec<Complex64>>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| limit_values(tau, terms, SeedSpec::new(master, t).child(LIMIT_STREAM), grid))
        .collect()
}

/// `trials` draws of `q_n` at the grid for matrices from `dist`.
pub fn finite_samples(
    dist: &EntryDistribution,
    n: usize,
    master: u64,
    trials: usize,
    grid: &[Complex64],
) -> Result<Vec<Vec<Complex64>>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let a = sample_matrix(dist, n, trial_seed(master, n, t))?;
            finite_qn_values(&a, grid)
        })
        .collect()
}

/// Compares `q_n` with `kappa exp(-F)` at every n of the config, `trials`
/// draws per side.
pub fn run_qn_convergence(config: &ExperimentConfig) -> Result<Vec<QnReport>> {
    config.validate()?;
    if config.trials < MIN_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "distributional comparison needs at least {MIN_TRIALS} trials per side, got {}",
            config.trials
        )));
    }
    if config.z.is_empty() {
        return Err(Error::InvalidArgument("the evaluation grid is empty".into()));
    }
    let dist = config.distribution()?;
    let master = config.seed()?;
    let terms = match config.terms {
        Some(k) => k,
        None => terms_for_grid(&config.z)?,
    };
    let pool = config.pool()?;
    let limit = pool.install(|| limit_samples(dist.tau(), terms, master, config.trials, &config.z))?;
    config
        .n
        .iter()
        .map(|&n| {
            let finite = pool.install(|| finite_samples(&dist, n, master, config.trials, &config.z))?;
            let (points, min_modulus) = compare_samples(&finite, &limit, &config.z)?;
            let pass = min_modulus.pass && points.iter().all(|p| p.re.pass && p.im.pass && p.modulus.pass);
            Ok(QnReport {
                dist: dist.id().to_string(),
                n,
                tau: dist.tau(),
                terms,
                trials: config.trials,
                points,
                min_modulus,
                pass,
            })
        })
        .collect()
}
