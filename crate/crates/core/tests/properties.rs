mod common;

use common::c;
use girko::densela::{determinant, eigenvalues, operator_norm, spectral_radius, traces_of_powers};
use girko::ensemble::{builtin_distributions, sample_matrix, SeedSpec};
use girko::experiments::ks_two_sample;
use girko::limitlaw::{eval_limit, kappa, limit_coeffs, sample_x, MeanSequence};
use girko::momentcomb::{exact_trace_moment, split_trace, wick_limit_moment, MomentQuery, Sign};
use girko::recpoly::{minor_sum_coeffs, newton_coeffs, qn_coeffs, CoefficientSeries, DEGREE_TOL};
use girko::ComplexMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn random_matrix(n: usize, dist: usize, seed: u64) -> ComplexMatrix {
    let dists = builtin_distributions();
    sample_matrix(&dists[dist % dists.len()], n, SeedSpec::new(seed, 0)).unwrap()
}

/// Unitary factor of a complex Gaussian matrix by modified Gram-Schmidt.
fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let g = sample_matrix(&girko::ensemble::EntryDistribution::complex_gaussian(), n, SeedSpec::new(seed, 1)).unwrap();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..n {
        for p in 0..j {
            let proj: Complex64 = (0..n).map(|i| cols[p][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let v = cols[p][i];
                cols[j][i] -= proj * v;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= norm);
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

fn tau_strategy() -> impl Strategy<Value = Complex64> {
    (0.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn disc_point(max_r: f64) -> impl Strategy<Value = Complex64> {
    (0.0f64..max_r, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_reproduces_trace_and_determinant(n in 1usize..=32, dist in 0usize..5, seed: u64) {
        let a = random_matrix(n, dist, seed).normalized();
        let s = eigenvalues(&a);
        prop_assert!(s.converged);
        let tr = a.trace();
        let det = determinant(&a);
        prop_assert!((s.sum() - tr).norm() <= 1e-6 * (1.0 + tr.norm()));
        prop_assert!((s.product() - det).norm() <= 1e-6 * (1.0 + det.norm()));
    }

    #[test]
    fn radius_is_unitarily_invariant(n in 1usize..=24, dist in 0usize..5, seed: u64) {
        let a = random_matrix(n, dist, seed).normalized();
        let u = random_unitary(n, seed);
        let b = u.matmul(&a).matmul(&u.conj_transpose());
        prop_assert!((spectral_radius(&a).value - spectral_radius(&b).value).abs() <= 1e-6);
    }

    #[test]
    fn norm_dominates_radius(n in 1usize..=32, dist in 0usize..5, seed: u64) {
        let a = random_matrix(n, dist, seed).normalized();
        prop_assert!(operator_norm(&a).value >= spectral_radius(&a).value - 1e-8);
    }

    #[test]
    fn traces_match_eigenvalue_power_sums(n in 1usize..=32, dist in 0usize..5, seed: u64) {
        let a = random_matrix(n, dist, seed).normalized();
        let traces = traces_of_powers(&a, 6).unwrap();
        let sums = eigenvalues(&a).power_sums(6);
        for (t, s) in traces.iter().zip(&sums) {
            prop_assert!((t - s).norm() <= 1e-6 * (1.0 + t.norm()));
        }
    }

    #[test]
    fn minor_sums_equal_trace_recurrence(n in 1usize..=8, dist in 0usize..5, seed: u64) {
        let a = random_matrix(n, dist, seed);
        let minors = minor_sum_coeffs(&a, n).unwrap();
        let newton = newton_coeffs(&traces_of_powers(&a.normalized(), n).unwrap()).unwrap();
        prop_assert!(minors.max_abs_diff(&newton) <= 1e-10);
    }

    #[test]
    fn coefficients_vanish_past_degree_n(n in 1usize..=16, dist in 0usize..5, seed: u64) {
        let a = random_matrix(n, dist, seed);
        let s = qn_coeffs(&a, n + 4).unwrap();
        prop_assert!(s.tail_beyond(n) <= DEGREE_TOL);
    }

    #[test]
    fn trace_split_identity(n in 1usize..=6, k in 1usize..=5, dist in 0usize..5, seed: u64) {
        let a = random_matrix(n, dist, seed);
        let (t, r) = split_trace(&a, k).unwrap();
        let tr = traces_of_powers(&a, k).unwrap()[k - 1];
        prop_assert!((t * k as f64 + r - tr).norm() <= 1e-9 * (1.0 + tr.norm()));
    }

    #[test]
    fn sampling_is_a_function_of_the_seed(n in 1usize..=12, dist in 0usize..5, seed: u64, trial: u64) {
        let dists = builtin_distributions();
        let d = &dists[dist];
        let a = sample_matrix(d, n, SeedSpec::new(seed, trial)).unwrap();
        let b = sample_matrix(d, n, SeedSpec::new(seed, trial)).unwrap();
        prop_assert_eq!(&a, &b);
        let other = sample_matrix(d, n, SeedSpec::new(seed, trial.wrapping_add(1))).unwrap();
        prop_assert!(n * n < 4 || a != other);
    }

    #[test]
    fn kappa_squares_to_its_argument(tau in tau_strategy(), z in disc_point(0.999)) {
        let k = kappa(tau, z).unwrap();
        prop_assert!((k * k - (1.0 - tau * z * z)).norm() < 1e-12);
        prop_assert!(k.re > 0.0);
    }

    #[test]
    fn series_and_closed_form_of_limit_agree(tau in tau_strategy(), z in disc_point(0.5), seed: u64) {
        let sample = sample_x(tau, 200, SeedSpec::new(seed, 0)).unwrap();
        let series = limit_coeffs(&sample, &MeanSequence::new(tau, 200), 200).unwrap();
        let direct = eval_limit(&sample, z).unwrap();
        prop_assert!((series.eval(z) - direct).norm() <= 1e-6 * (1.0 + direct.norm()));
    }

    #[test]
    fn limit_never_vanishes_on_a_grid(tau in tau_strategy(), seed: u64) {
        let sample = sample_x(tau, 200, SeedSpec::new(seed, 0)).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let z = Complex64::from_polar(0.05 + 0.08 * i as f64, 0.6 * j as f64);
                prop_assert!(eval_limit(&sample, z).unwrap().norm() > 0.0);
            }
        }
    }

    #[test]
    fn ks_distance_is_a_symmetric_fraction(
        xs in prop::collection::vec(-5.0f64..5.0, 1..60),
        ys in prop::collection::vec(-5.0f64..5.0, 1..60),
    ) {
        let d = ks_two_sample(&xs, &ys).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_two_sample(&ys, &xs).unwrap());
        prop_assert_eq!(ks_two_sample(&xs, &xs).unwrap(), 0.0);
    }

    #[test]
    fn conjugating_every_factor_conjugates_the_moment(
        ks in prop::collection::vec(1usize..=3, 1..=4),
        mask in 0u32..16,
        tau in tau_strategy(),
    ) {
        let signs: Vec<Sign> = (0..ks.len()).map(|i| if mask >> i & 1 == 1 { Sign::Conj } else { Sign::Plain }).collect();
        let flipped: Vec<Sign> = signs.iter().map(|s| match s { Sign::Plain => Sign::Conj, Sign::Conj => Sign::Plain }).collect();
        let q = MomentQuery::new(ks.clone(), signs).unwrap();
        let qf = MomentQuery::new(ks, flipped).unwrap();
        prop_assert!((wick_limit_moment(&q, tau) - wick_limit_moment(&qf, tau).conj()).norm() < 1e-14);
        if q.total_order() <= 6 {
            let dist = girko::ensemble::EntryDistribution::complex_rademacher();
            let e = exact_trace_moment(&q, 3, &dist).unwrap();
            let ef = exact_trace_moment(&qf, 3, &dist).unwrap();
            prop_assert!((e - ef.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn query_text_round_trips(ks in prop::collection::vec(1usize..=9, 1..=5), mask in 0u32..32) {
        let signs: Vec<&str> = (0..ks.len()).map(|i| if mask >> i & 1 == 1 { "c" } else { "p" }).collect();
        let ks_text: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
        let q = MomentQuery::parse(&ks_text.join(","), &signs.join(",")).unwrap();
        prop_assert_eq!(q.to_string(), format!("ks={} signs={}", ks_text.join(","), signs.join(",")));
    }
}

#[test]
fn newton_recurrence_inverts_power_sums_of_a_diagonal() {
    // q(z) = prod (1 - z d_i)
    let d = [c(0.5, 0.1), c(-0.3, 0.0), c(0.0, 0.9)];
    let sums: Vec<Complex64> = (1..=5).map(|k| d.iter().map(|x| x.powu(k)).sum()).collect();
    let s = newton_coeffs(&sums).unwrap();
    let want = CoefficientSeries::new(vec![
        c(1.0, 0.0),
        -(d[0] + d[1] + d[2]),
        d[0] * d[1] + d[0] * d[2] + d[1] * d[2],
        -(d[0] * d[1] * d[2]),
    ]);
    assert!(s.max_abs_diff(&want) < 1e-14);
}
