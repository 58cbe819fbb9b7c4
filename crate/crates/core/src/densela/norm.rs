use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Flagged;
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Stop once `|A^H A v - lambda v| <= tol * lambda`.
    pub tol: f64,
    pub max_iter: usize,
    /// Fresh random start vectors tried when an iterate collapses to zero.
    pub restarts: usize,
    /// Seed of the start vectors; fixed so the norm is a pure function of `A`.
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 50_000,
            restarts: 3,
            seed: 0x0005_eed0_fa11,
        }
    }
}

fn unit_random(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Largest singular value by power iteration on the Gram matrix `A^H A`.
pub fn operator_norm(a: &ComplexMatrix) -> Flagged<f64> {
    operator_norm_with(a, &PowerOptions::default())
}

pub fn operator_norm_with(a: &ComplexMatrix, opts: &PowerOptions) -> Flagged<f64> {
    let n = a.dim();
    if n == 0 || a.as_slice().iter().all(|z| z.norm_sqr() == 0.0) {
        return Flagged::ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = 0.0f64;
    for _ in 0..=opts.restarts {
        let mut v = unit_random(n, &mut rng);
        let mut lambda = 0.0;
        let mut collapsed = false;
        for _ in 0..opts.max_iter {
            let av = a.matvec(&v);
            let w = a.adjoint_matvec(&av);
            let wnorm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if wnorm == 0.0 {
                collapsed = true;
                break;
            }
            lambda = av.iter().map(|z| z.norm_sqr()).sum::<f64>();
            let res = w
                .iter()
                .zip(&v)
                .map(|(&wi, &vi)| (wi - vi * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt();
            v = w.into_iter().map(|z| z / wnorm).collect();
            if res <= opts.tol * lambda {
                return Flagged::ok(lambda.sqrt().max(best));
            }
        }
        best = best.max(lambda.sqrt());
        if !collapsed {
            return Flagged::unconverged(best);
        }
    }
    Flagged::unconverged(best)
}
