//! Seeded Monte Carlo experiments on the spectral radius and on the
//! convergence of `q_n`, plus the statistics they report.

mod config;
mod qn;
mod radius;
mod stats;

pub use config::{ExperimentConfig, ExperimentKind, GRID_RADIUS};
pub use qn::{
    compare_samples, finite_qn_values, finite_samples, limit_samples, limit_values, run_qn_convergence,
    terms_for_grid, PointReport, QnReport, KS_LEVEL, MIN_TRIALS, NEWTON_MAX_N,
};
pub use radius::{
    csv_header, estimate_exceedance, read_trial_csv, run_radius_sweep, run_trial, summarize, write_trial_csv,
    RadiusSummary, RadiusSweep, TrialRecord, MAX_FAILURE_RATE,
};
pub use stats::{
    exceedance_of, kolmogorov_survival, ks_null_quantile, ks_two_sample, median, wilson_interval, Exceedance,
    TestReport,
};

use crate::ensemble::SeedSpec;

/// Stream of trial `trial` at dimension `n`; distinct dimensions never share one.
pub fn trial_seed(master_seed: u64, n: usize, trial: u64) -> SeedSpec {
    SeedSpec::new(master_seed, (n as u64) << 32 | trial)
}
