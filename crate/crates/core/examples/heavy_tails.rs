//! Entries with infinite fourth moment: the operator norm of `A / sqrt(n)`
//! keeps growing while the spectral radius stays near one.

use girko::ensemble::HEAVY4;
use girko::experiments::{run_radius_sweep, ExperimentConfig, RadiusSummary};

pub fn run(sizes: &[usize], trials: usize) -> girko::Result<Vec<RadiusSummary>> {
    let mut rows = Vec::new();
    for dist in ["complex_gaussian", HEAVY4] {
        let config = ExperimentConfig {
            dist: dist.into(),
            n: sizes.to_vec(),
            trials,
            master_seed: Some(5),
            ..ExperimentConfig::default()
        };
        for s in run_radius_sweep(&config)?.summaries {
            println!("{dist:<18} n={:<5} median sigma {:.3}  median rho {:.3}", s.n, s.median_sigma, s.median_rho);
            rows.push(s);
        }
    }
    Ok(rows)
}

fn main() -> girko::Result<()> {
    run(&[32, 128, 512], 20)?;
    Ok(())
}
