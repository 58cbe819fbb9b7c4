//! Median spectral radius of `A / sqrt(n)` across dimensions, for two laws.
//!
//! ```text
//! cargo run --release --example spectral_radius
//! ```

use girko::experiments::{run_radius_sweep, ExperimentConfig, RadiusSummary};

pub fn run(dist: &str, sizes: &[usize], trials: usize) -> girko::Result<Vec<RadiusSummary>> {
    let config = ExperimentConfig {
        dist: dist.into(),
        n: sizes.to_vec(),
        trials,
        master_seed: Some(1),
        ..ExperimentConfig::default()
    };
    Ok(run_radius_sweep(&config)?.summaries)
}

fn main() -> girko::Result<()> {
    for dist in ["complex_gaussian", "rademacher"] {
        println!("{dist}");
        println!("{:>6} {:>10} {:>10} {:>10} {:>12}", "n", "rho", "|rho-1|", "sigma", "P(gap>=0.1)");
        for s in run(dist, &[32, 64, 128, 256], 40)? {
            println!(
                "{:>6} {:>10.4} {:>10.4} {:>10.4} {:>12.3}",
                s.n, s.median_rho, s.median_abs_gap, s.median_sigma, s.exceedance.value
            );
        }
    }
    Ok(())
}
