//! Monte Carlo checks with fixed seeds; tolerances are five standard errors.

use girko::ensemble::{builtin_distributions, sample_matrix, truncate_scalar, EntryDistribution, SeedSpec};
use girko::experiments::{run_qn_convergence, run_radius_sweep, ExperimentConfig, ExperimentKind};
use girko::limitlaw::sample_x;
use girko::momentcomb::{exact_mean_rk, split_trace};
use num_complex::Complex64;

/// Sample mean and the standard error of the mean of complex values.
fn mean_and_se(values: &[Complex64]) -> (Complex64, f64) {
    let n = values.len() as f64;
    let mean: Complex64 = values.iter().sum::<Complex64>() / n;
    let var = values.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn assert_close(what: &str, values: &[Complex64], expected: Complex64) {
    let (mean, se) = mean_and_se(values);
    assert!(
        (mean - expected).norm() <= 5.0 * se + 1e-12,
        "{what}: mean {mean} vs {expected} (se {se:e})"
    );
}

#[test]
fn entry_moments_match_their_tables() {
    for dist in builtin_distributions() {
        let draws = dist.sample_many(1_000_000, SeedSpec::new(11, 0));
        let id = dist.id().to_string();
        assert_close(&format!("{id} m10"), &draws, dist.moment(1, 0).unwrap());
        let abs2: Vec<Complex64> = draws.iter().map(|a| Complex64::new(a.norm_sqr(), 0.0)).collect();
        assert_close(&format!("{id} m11"), &abs2, dist.moment(1, 1).unwrap());
        let sq: Vec<Complex64> = draws.iter().map(|a| a * a).collect();
        assert_close(&format!("{id} m20"), &sq, dist.moment(2, 0).unwrap());
    }
}

#[test]
fn truncated_entries_are_centred() {
    for dist in builtin_distributions() {
        for level in [0.8, 1.5, 3.0] {
            let shift = dist.truncated_mean(level).unwrap();
            let draws: Vec<Complex64> = dist
                .sample_many(1_000_000, SeedSpec::new(12, 0))
                .into_iter()
                .map(|a| truncate_scalar(a, level, shift))
                .collect();
            assert_close(&format!("{} truncated at {level}", dist.id()), &draws, Complex64::new(0.0, 0.0));
        }
    }
}

#[test]
fn heavy_fourth_moment_keeps_growing() {
    let heavy = girko::ensemble::distribution_by_id(girko::ensemble::HEAVY4).unwrap();
    let mut medians = Vec::new();
    for size in [1_000usize, 10_000, 100_000, 1_000_000] {
        let mut m4: Vec<f64> = (0..20)
            .map(|s| {
                let draws = heavy.sample_many(size, SeedSpec::new(13, s));
                draws.iter().map(|a| a.norm_sqr().powi(2)).sum::<f64>() / size as f64
            })
            .collect();
        m4.sort_by(f64::total_cmp);
        medians.push(0.5 * (m4[9] + m4[10]));
    }
    assert!(medians.windows(2).all(|w| w[0] < w[1]), "{medians:?}");
}

#[test]
fn limit_coefficients_have_the_prescribed_covariance() {
    let taus = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.5, 0.0),
    ];
    let samples = 100_000;
    for tau in taus {
        let draws: Vec<Vec<Complex64>> = (0..samples)
            .map(|t| sample_x(tau, 10, SeedSpec::new(14, t)).unwrap().x)
            .collect();
        for k in [1usize, 2, 5, 10] {
            let xk: Vec<Complex64> = draws.iter().map(|x| x[k - 1]).collect();
            assert_close(&format!("E X_{k}, tau={tau}"), &xk, Complex64::new(0.0, 0.0));
            let abs2: Vec<Complex64> = xk.iter().map(|x| Complex64::new(x.norm_sqr(), 0.0)).collect();
            assert_close(&format!("E|X_{k}|^2, tau={tau}"), &abs2, Complex64::new(1.0, 0.0));
            let sq: Vec<Complex64> = xk.iter().map(|x| x * x).collect();
            assert_close(&format!("E X_{k}^2, tau={tau}"), &sq, tau.powu(k as u32));
        }
    }
}

/// `r_k / n^{k/2}` for k = 2, 3, 4 over `samples` matrices.
fn normalized_rk(dist: &EntryDistribution, n: usize, samples: u64) -> Vec<[Complex64; 3]> {
    (0..samples)
        .map(|t| {
            let a = sample_matrix(dist, n, SeedSpec::new(15, (n as u64) << 32 | t)).unwrap();
            let mut out = [Complex64::new(0.0, 0.0); 3];
            for k in 2..=4 {
                out[k - 2] = split_trace(&a, k).unwrap().1 / (n as f64).powf(k as f64 / 2.0);
            }
            out
        })
        .collect()
}

fn variance_and_se(values: &[Complex64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean: Complex64 = values.iter().sum::<Complex64>() / n;
    let dev: Vec<f64> = values.iter().map(|v| (v - mean).norm_sqr()).collect();
    let var = dev.iter().sum::<f64>() / n;
    let m4 = dev.iter().map(|d| d * d).sum::<f64>() / n;
    (var, ((m4 - var * var).max(0.0) / n).sqrt())
}

#[test]
fn repeated_index_part_has_the_exact_mean_and_concentrates() {
    let samples = 10_000;
    for dist in [
        EntryDistribution::rademacher(),
        EntryDistribution::complex_rademacher(),
        EntryDistribution::complex_gaussian(),
    ] {
        let mut variances = Vec::new();
        for n in [4usize, 16, 64] {
            let rk = normalized_rk(&dist, n, samples);
            let mut vars = [(0.0, 0.0); 3];
            for k in 2..=4 {
                let col: Vec<Complex64> = rk.iter().map(|r| r[k - 2]).collect();
                let want = exact_mean_rk(k, n, &dist).unwrap() / (n as f64).powf(k as f64 / 2.0);
                assert_close(&format!("{} n={n} k={k}", dist.id()), &col, want);
                vars[k - 2] = variance_and_se(&col);
            }
            variances.push(vars);
        }
        if dist.is_bounded() {
            let (v16, v64) = (variances[1], variances[2]);
            for k in 0..3 {
                let slack = 5.0 * (v16[k].1.powi(2) + v64[k].1.powi(2)).sqrt();
                assert!(v64[k].0 <= v16[k].0 + slack, "{} k={}: {v64:?} vs {v16:?}", dist.id(), k + 2);
            }
        }
    }
}

#[test]
fn exceedance_shrinks_with_dimension() {
    let cfg = ExperimentConfig {
        n: vec![64, 256],
        trials: 100,
        master_seed: Some(16),
        ..ExperimentConfig::default()
    };
    let sweep = run_radius_sweep(&cfg).unwrap();
    let (small, large) = (&sweep.summaries[0].exceedance, &sweep.summaries[1].exceedance);
    assert!(large.value < small.value || (large.value == 0.0 && small.value == 0.0), "{small:?} {large:?}");
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let base = ExperimentConfig {
        n: vec![8, 24],
        trials: 30,
        master_seed: Some(17),
        ..ExperimentConfig::default()
    };
    let runs: Vec<_> = [1, 4, 8]
        .iter()
        .map(|&w| run_radius_sweep(&ExperimentConfig { workers: w, ..base.clone() }).unwrap())
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);

    let qn = ExperimentConfig {
        experiment: ExperimentKind::Qn,
        n: vec![8],
        ..base
    };
    let reports: Vec<_> = [1, 4, 8]
        .iter()
        .map(|&w| {
            run_qn_convergence(&ExperimentConfig {
                workers: w,
                trials: 200,
                ..qn.clone()
            })
            .unwrap()
        })
        .collect();
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
}
