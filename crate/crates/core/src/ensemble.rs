//! Entry laws and Girko matrix sampling.
//!
//! Every law here has mean zero and unit variance. `tau` is the pseudo-variance
//! `E[a^2]`, which governs both the deterministic factor and the covariance
//! structure of the limiting random analytic function.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

pub const COMPLEX_GAUSSIAN: &str = "complex_gaussian";
pub const REAL_GAUSSIAN: &str = "real_gaussian";
pub const RADEMACHER: &str = "rademacher";
pub const COMPLEX_RADEMACHER: &str = "complex_rademacher";
pub const HEAVY4: &str = "heavy4";

/// Tail index of the built-in heavy law: `P(|a| > t) ~ t^-HEAVY_TAIL_INDEX`.
/// Anything in (2, 4] gives finite variance and infinite fourth moment.
pub const HEAVY_TAIL_INDEX: f64 = 2.5;

/// Largest moment order declared for the Gaussian tables (factorials stay exact in f64).
const GAUSSIAN_MAX_ORDER: u32 = 24;
const DISCRETE_MAX_ORDER: u32 = 64;

/// Identifies a reproducible random stream.
///
/// The stream is a pure function of `(master_seed, trial_index)`: both words
/// are hashed together into a 256-bit ChaCha key, so neighbouring indices give
/// unrelated streams and the order in which trials run does not matter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    fn key(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"girko-seed-v1");
        h.update(self.master_seed.to_le_bytes());
        h.update(self.trial_index.to_le_bytes());
        h.finalize().into()
    }

    pub fn rng(&self) -> ChaCha20Rng {
        ChaCha20Rng::from_seed(self.key())
    }

    /// 64-bit digest of the derived key, reported in output records.
    pub fn derived_seed(&self) -> u64 {
        let k = self.key();
        u64::from_le_bytes(k[..8].try_into().expect("8 bytes"))
    }

    /// A sub-stream, e.g. to keep matrix and limit draws of one trial apart.
    pub fn child(&self, salt: u64) -> SeedSpec {
        SeedSpec::new(self.derived_seed() ^ salt.rotate_left(17), self.trial_index)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Law {
    ComplexGaussian,
    RealGaussian,
    Rademacher,
    ComplexRademacher,
    /// Symmetric real law with density proportional to `min(1, |x|^-(alpha+1))`,
    /// rescaled to unit variance.
    Heavy { alpha: f64, scale: f64 },
    /// Finitely supported law given by atoms and their probabilities.
    Discrete(Vec<(Complex64, f64)>),
}

/// A law for the matrix entries.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryDistribution {
    id: String,
    law: Law,
    tau: Complex64,
    bound: Option<f64>,
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn double_factorial_odd(m: u32) -> f64 {
    // (m-1)!! for even m
    (1..m).step_by(2).map(f64::from).product()
}

impl EntryDistribution {
    pub fn complex_gaussian() -> Self {
        Self {
            id: COMPLEX_GAUSSIAN.into(),
            law: Law::ComplexGaussian,
            tau: Complex64::new(0.0, 0.0),
            bound: None,
        }
    }

    pub fn real_gaussian() -> Self {
        Self {
            id: REAL_GAUSSIAN.into(),
            law: Law::RealGaussian,
            tau: Complex64::new(1.0, 0.0),
            bound: None,
        }
    }

    pub fn rademacher() -> Self {
        Self {
            id: RADEMACHER.into(),
            law: Law::Rademacher,
            tau: Complex64::new(1.0, 0.0),
            bound: Some(1.0),
        }
    }

    pub fn complex_rademacher() -> Self {
        Self {
            id: COMPLEX_RADEMACHER.into(),
            law: Law::ComplexRademacher,
            tau: Complex64::new(0.0, 0.0),
            bound: Some(1.0),
        }
    }

    /// Symmetric power-tail law with tail index `alpha` in (2, 4]: finite
    /// variance, infinite fourth moment.
    pub fn heavy(id: impl Into<String>, alpha: f64) -> Result<Self> {
        if !(alpha > 2.0 && alpha <= 4.0) {
            return Err(Error::InvalidArgument(format!(
                "heavy tail index must lie in (2, 4], got {alpha}"
            )));
        }
        let half_norm = alpha / (2.0 * (alpha + 1.0));
        let raw_variance = 2.0 * half_norm * (1.0 / 3.0 + 1.0 / (alpha - 2.0));
        Ok(Self {
            id: id.into(),
            law: Law::Heavy {
                alpha,
                scale: 1.0 / raw_variance.sqrt(),
            },
            tau: Complex64::new(1.0, 0.0),
            bound: None,
        })
    }

    /// Finitely supported law; atoms must already have mean 0 and variance 1.
    pub fn discrete(id: impl Into<String>, atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        let id = id.into();
        if atoms.is_empty() || atoms.iter().any(|&(_, p)| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "discrete law `{id}` needs atoms with positive probabilities"
            )));
        }
        let total: f64 = atoms.iter().map(|&(_, p)| p).sum();
        let mean: Complex64 = atoms.iter().map(|&(a, p)| a * p).sum();
        let var: f64 = atoms.iter().map(|&(a, p)| a.norm_sqr() * p).sum();
        if (total - 1.0).abs() > 1e-12 || mean.norm() > 1e-12 || (var - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "discrete law `{id}` must have total mass 1, mean 0, variance 1 \
                 (got {total}, {mean}, {var})"
            )));
        }
        let tau = atoms.iter().map(|&(a, p)| a * a * p).sum();
        let bound = atoms.iter().map(|(a, _)| a.norm()).fold(0.0, f64::max);
        Ok(Self {
            id,
            law: Law::Discrete(atoms),
            tau,
            bound: Some(bound),
        })
    }

    /// Centers and rescales arbitrary atoms to mean 0, variance 1.
    pub fn standardized_discrete(id: impl Into<String>, raw: &[(Complex64, f64)]) -> Result<Self> {
        let total: f64 = raw.iter().map(|&(_, p)| p).sum();
        let mean: Complex64 = raw.iter().map(|&(a, p)| a * p).sum::<Complex64>() / total;
        let var: f64 = raw.iter().map(|&(a, p)| (a - mean).norm_sqr() * p).sum::<f64>() / total;
        if !(var > 0.0) {
            return Err(Error::InvalidArgument("degenerate discrete law".into()));
        }
        let sd = var.sqrt();
        let atoms = raw
            .iter()
            .map(|&(a, p)| ((a - mean) / sd, p / total))
            .collect();
        Self::discrete(id, atoms)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// `E[a^2]`.
    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn is_bounded(&self) -> bool {
        self.bound.is_some()
    }

    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    /// Atoms and probabilities for finitely supported laws.
    pub fn support(&self) -> Option<Vec<(Complex64, f64)>> {
        match &self.law {
            Law::Rademacher => Some(vec![
                (Complex64::new(1.0, 0.0), 0.5),
                (Complex64::new(-1.0, 0.0), 0.5),
            ]),
            Law::ComplexRademacher => Some(
                [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
                    .iter()
                    .map(|&(re, im)| (Complex64::new(re, im) * FRAC_1_SQRT_2, 0.25))
                    .collect(),
            ),
            Law::Discrete(atoms) => Some(atoms.clone()),
            _ => None,
        }
    }

    /// Highest total order `p + q` for which [`moment`](Self::moment) answers.
    pub fn max_moment_order(&self) -> u32 {
        match &self.law {
            Law::ComplexGaussian | Law::RealGaussian => GAUSSIAN_MAX_ORDER,
            Law::Rademacher | Law::ComplexRademacher | Law::Discrete(_) => DISCRETE_MAX_ORDER,
            Law::Heavy { alpha, .. } => (alpha.ceil() as u32).saturating_sub(1),
        }
    }

    /// `E[a^p conj(a)^q]`.
    ///
    /// Exact closed forms for the Gaussian and Rademacher families (their
    /// tables are Gaussian integers). Orders past the declared maximum, or
    /// infinite moments of the heavy law, are refused.
    pub fn moment(&self, p: u32, q: u32) -> Result<Complex64> {
        let unavailable = || Error::MomentUnavailable {
            dist: self.id.clone(),
            p,
            q,
        };
        if p + q > self.max_moment_order() {
            return Err(unavailable());
        }
        let real = |x: f64| Complex64::new(x, 0.0);
        let m = p + q;
        Ok(match &self.law {
            Law::ComplexGaussian => {
                if p == q {
                    real(factorial(p))
                } else {
                    real(0.0)
                }
            }
            Law::RealGaussian => {
                if m % 2 == 0 {
                    real(double_factorial_odd(m))
                } else {
                    real(0.0)
                }
            }
            Law::Rademacher => real(if m % 2 == 0 { 1.0 } else { 0.0 }),
            Law::ComplexRademacher => {
                // a = e^{i theta}, theta in pi/4 + (pi/2)Z: average of e^{i(p-q)theta}
                let d = p as i64 - q as i64;
                if d.rem_euclid(4) == 0 {
                    real(if (d / 4).rem_euclid(2) == 0 { 1.0 } else { -1.0 })
                } else {
                    real(0.0)
                }
            }
            Law::Heavy { alpha, scale } => {
                if m % 2 == 1 {
                    real(0.0)
                } else {
                    let half_norm = alpha / (2.0 * (alpha + 1.0));
                    let raw = 2.0 * half_norm * (1.0 / (m as f64 + 1.0) + 1.0 / (alpha - m as f64));
                    real(raw * scale.powi(m as i32))
                }
            }
            Law::Discrete(atoms) => atoms
                .iter()
                .map(|&(a, w)| a.powu(p) * a.conj().powu(q) * w)
                .sum(),
        })
    }

    /// `E[a 1{|a| < M}]`, the centering constant of the truncated entries.
    pub fn truncated_mean(&self, m: f64) -> Result<Complex64> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "truncation level must be positive and finite, got {m}"
            )));
        }
        Ok(match &self.law {
            // symmetric laws: a and -a are equally likely
            Law::ComplexGaussian
            | Law::RealGaussian
            | Law::Rademacher
            | Law::ComplexRademacher
            | Law::Heavy { .. } => Complex64::new(0.0, 0.0),
            Law::Discrete(atoms) => atoms
                .iter()
                .filter(|(a, _)| a.norm() < m)
                .map(|&(a, w)| a * w)
                .sum(),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        match &self.law {
            Law::ComplexGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
            }
            Law::RealGaussian => Complex64::new(rng.sample(StandardNormal), 0.0),
            Law::Rademacher => Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0),
            Law::ComplexRademacher => {
                let re = if rng.gen::<bool>() { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                let im = if rng.gen::<bool>() { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                Complex64::new(re, im)
            }
            Law::Heavy { alpha, scale } => {
                let u: f64 = rng.gen();
                let body = alpha / (alpha + 1.0);
                let magnitude = if u < body {
                    u / body
                } else {
                    ((alpha + 1.0) * (1.0 - u)).powf(-1.0 / alpha)
                };
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                Complex64::new(sign * magnitude * scale, 0.0)
            }
            Law::Discrete(atoms) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for &(a, w) in atoms {
                    acc += w;
                    if u < acc {
                        return a;
                    }
                }
                atoms.last().expect("nonempty").0
            }
        }
    }

    /// `count` iid scalar draws from the stream of `seed`.
    pub fn sample_many(&self, count: usize, seed: SeedSpec) -> Vec<Complex64> {
        let mut rng = seed.rng();
        (0..count).map(|_| self.sample(&mut rng)).collect()
    }
}

/// The built-in laws, addressed by their stable ids.
pub fn builtin_distributions() -> Vec<EntryDistribution> {
    vec![
        EntryDistribution::complex_gaussian(),
        EntryDistribution::real_gaussian(),
        EntryDistribution::rademacher(),
        EntryDistribution::complex_rademacher(),
        EntryDistribution::heavy(HEAVY4, HEAVY_TAIL_INDEX).expect("valid tail index"),
    ]
}

pub fn distribution_by_id(id: &str) -> Result<EntryDistribution> {
    let all = builtin_distributions();
    let valid = all.iter().map(|d| d.id().to_string()).collect();
    all.into_iter()
        .find(|d| d.id() == id)
        .ok_or_else(|| Error::UnknownDistribution {
            id: id.to_string(),
            valid,
        })
}

/// Samples the n x n matrix with iid entries drawn from `dist`, row by row.
pub fn sample_matrix(dist: &EntryDistribution, n: usize, seed: SeedSpec) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let data = (0..n * n).map(|_| dist.sample(&mut rng)).collect();
    ComplexMatrix::from_row_major(n, data)
}

/// Entrywise `a 1{|a| < M} - E[a 1{|a| < M}]`.
pub fn truncate_matrix(a: &ComplexMatrix, dist: &EntryDistribution, m: f64) -> Result<ComplexMatrix> {
    let shift = dist.truncated_mean(m)?;
    Ok(ComplexMatrix::from_fn(a.dim(), |i, j| {
        let x = a[(i, j)];
        truncate_scalar(x, m, shift)
    }))
}

#[inline]
pub fn truncate_scalar(x: Complex64, m: f64, shift: Complex64) -> Complex64 {
    if x.norm() < m {
        x - shift
    } else {
        -shift
    }
}
