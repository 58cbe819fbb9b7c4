//! Draws of the limiting random function `kappa(z) exp(-F(z))` compared with
//! `q_n(z)` by two-sample KS tests on the real part, imaginary part and modulus.

use girko::ensemble::distribution_by_id;
use girko::experiments::{run_qn_convergence, ExperimentConfig, ExperimentKind, QnReport};
use girko::limitlaw::{eval_limit, required_order, sample_x, TAIL_TOL};
use girko::ensemble::SeedSpec;
use num_complex::Complex64;

pub fn run(dist: &str, sizes: &[usize], trials: usize) -> girko::Result<Vec<QnReport>> {
    let tau = distribution_by_id(dist)?.tau();
    let order = required_order(0.9, TAIL_TOL)?;
    let sample = sample_x(tau, order, SeedSpec::new(3, 0))?;
    for r in [0.0, 0.3, 0.6, 0.9] {
        let z = Complex64::new(r, 0.0);
        println!("one draw at z={r}: {:.6}", eval_limit(&sample, z)?);
    }
    let config = ExperimentConfig {
        experiment: ExperimentKind::Qn,
        dist: dist.into(),
        n: sizes.to_vec(),
        trials,
        master_seed: Some(3),
        ..ExperimentConfig::default()
    };
    run_qn_convergence(&config)
}

fn main() -> girko::Result<()> {
    for report in run("rademacher", &[8, 32, 128], 400)? {
        println!("n={} terms={} pass={}", report.n, report.terms, report.pass);
        for p in &report.points {
            for t in [&p.re, &p.im, &p.modulus] {
                println!("  z={:.2} {:<10} D={:.4} (99.9% null {:.4})", p.z, t.statistic, t.value, t.threshold);
            }
        }
    }
    Ok(())
}
