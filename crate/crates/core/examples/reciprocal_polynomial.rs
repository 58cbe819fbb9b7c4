//! Coefficients of `det(I - zA/sqrt n)` by two routes, and the polynomial on a
//! few points of the disc.

use girko::ensemble::{EntryDistribution, SeedSpec, sample_matrix};
use girko::recpoly::{eval_qn, eval_qn_det, minor_sum_coeffs, newton_coeffs};
use girko::densela::traces_of_powers;
use num_complex::Complex64;

/// Largest disagreement between minor sums and the Newton recurrence, and
/// between the series and a direct determinant.
pub fn run(n: usize, seed: u64) -> girko::Result<(f64, f64)> {
    let a = sample_matrix(&EntryDistribution::rademacher(), n, SeedSpec::new(seed, 0))?;
    let minors = minor_sum_coeffs(&a, n)?;
    let newton = newton_coeffs(&traces_of_powers(&a.normalized(), n)?)?;
    for (k, (m, t)) in minors.coeffs.iter().zip(&newton.coeffs).enumerate() {
        println!("c_{k:<2} minors {m:>24.12}  newton {t:>24.12}");
    }
    let mut eval_gap = 0.0f64;
    for z in [Complex64::new(0.3, 0.0), Complex64::new(0.5, 0.2), Complex64::from_polar(0.9, 2.0)] {
        let series = eval_qn(&newton, z);
        let direct = eval_qn_det(&a, z);
        println!("q_n({z:.2}) = {series:.10} (det {direct:.10})");
        eval_gap = eval_gap.max((series - direct).norm());
    }
    Ok((minors.max_abs_diff(&newton), eval_gap))
}

fn main() -> girko::Result<()> {
    let (coeff_gap, eval_gap) = run(8, 7)?;
    println!("max coefficient gap {coeff_gap:.2e}, max evaluation gap {eval_gap:.2e}");
    Ok(())
}
