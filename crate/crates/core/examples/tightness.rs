//! Monte Carlo second moment of `q_n(z)` against the bound `1 / (1 - |z|^2)`,
//! and truncation of entries at a fixed level.

use girko::ensemble::{distribution_by_id, sample_matrix, truncate_matrix, SeedSpec};
use girko::recpoly::eval_qn_det;
use num_complex::Complex64;

/// `(n, |z|, mean |q_n(z)|^2, bound, mean |q_n(z) - q_n^trunc(z)|^2)`
pub type Row = (usize, f64, f64, f64, f64);

pub fn run(dist: &str, sizes: &[usize], trials: u64) -> girko::Result<Vec<Row>> {
    let dist = distribution_by_id(dist)?;
    let level = 3.0;
    let mut rows = Vec::new();
    for &n in sizes {
        for r in [0.3, 0.6, 0.9] {
            let z = Complex64::from_polar(r, 0.4);
            let (mut m2, mut moved) = (0.0, 0.0);
            for t in 0..trials {
                let a = sample_matrix(&dist, n, SeedSpec::new(9, (n as u64) << 32 | t))?;
                let q = eval_qn_det(&a, z);
                let qt = eval_qn_det(&truncate_matrix(&a, &dist, level)?, z);
                m2 += q.norm_sqr() / trials as f64;
                moved += (q - qt).norm_sqr() / trials as f64;
            }
            let bound = 1.0 / (1.0 - r * r);
            println!("n={n:<4} |z|={r} E|q|^2 ~ {m2:.4} (bound {bound:.4})  E|q - q_trunc|^2 ~ {moved:.2e}");
            rows.push((n, r, m2, bound, moved));
        }
    }
    Ok(rows)
}

fn main() -> girko::Result<()> {
    run("heavy4", &[16, 64, 256], 400)?;
    Ok(())
}
