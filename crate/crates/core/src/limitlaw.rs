//! The limiting random analytic function `kappa(z) exp(-F(z))` on the unit disc,
//! with `F(z) = sum_k X_k z^k / sqrt k` and `kappa(z) = sqrt(1 - tau z^2)`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::ensemble::SeedSpec;
use crate::error::{Error, Result};
use crate::recpoly::{newton_coeffs, CoefficientSeries};

/// Default bound on the variance of the neglected tail of `F`.
pub const TAIL_TOL: f64 = 1e-8;

/// One realization of the Gaussian coefficients `X_1..X_K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSample {
    #[serde(with = "pair")]
    pub tau: Complex64,
    #[serde(rename = "K")]
    pub order: usize,
    #[serde(rename = "X", with = "pairs")]
    pub x: Vec<Complex64>,
}

mod pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

mod pairs {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let v = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl LimitSample {
    /// A sample with every `X_k = 0`, isolating the deterministic factor.
    pub fn zeros(tau: Complex64, order: usize) -> Self {
        Self {
            tau,
            order,
            x: vec![Complex64::new(0.0, 0.0); order],
        }
    }
}

/// `mean_k = tau^(k/2)` for even k and 0 for odd k, k = 1..=K.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSequence {
    pub values: Vec<Complex64>,
}

impl MeanSequence {
    pub fn new(tau: Complex64, order: usize) -> Self {
        let values = (1..=order)
            .map(|k| {
                if k % 2 == 0 {
                    tau.powu((k / 2) as u32)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self { values }
    }
}

fn check_tau(tau: Complex64) -> Result<()> {
    if !(tau.norm() <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!("|tau| must be at most 1, got {}", tau.norm())));
    }
    Ok(())
}

/// `sqrt(1 - tau z^2)` on the branch with value 1 at the origin.
///
/// For `|z| < 1` and `|tau| <= 1`, `1 - tau z^2` has positive real part, so
/// the principal logarithm is continuous along every path from 0.
pub fn kappa(tau: Complex64, z: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisc(z.norm()));
    }
    Ok(((1.0 - tau * z * z).ln() * 0.5).exp())
}

/// Draws independent `X_1..X_K` with `E X_k = 0`, `E|X_k|^2 = 1`, `E X_k^2 = tau^k`.
///
/// Writing `tau^k = r e^{2 i phi}`, `X_k = e^{i phi} (U + i V)` with independent
/// real Gaussians of variances `(1 + r)/2` and `(1 - r)/2`.
pub fn sample_x(tau: Complex64, order: usize, seed: SeedSpec) -> Result<LimitSample> {
    check_tau(tau)?;
    if order == 0 {
        return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let mut x = Vec::with_capacity(order);
    for k in 1..=order {
        let tk = tau.powu(k as u32);
        let r = tk.norm().min(1.0);
        let phi = if r > 0.0 { tk.arg() / 2.0 } else { 0.0 };
        let u: f64 = rng.sample(StandardNormal);
        let v: f64 = rng.sample(StandardNormal);
        let z = Complex64::new(u * ((1.0 + r) / 2.0).sqrt(), v * ((1.0 - r) / 2.0).sqrt());
        x.push(Complex64::from_polar(1.0, phi) * z);
    }
    Ok(LimitSample { tau, order, x })
}

/// Upper bound `r^{2K} / (K (1 - r^2))` on `sum_{k > K} r^{2k} / k`.
pub fn tail_bound(radius: f64, order: usize) -> f64 {
    if radius == 0.0 {
        return 0.0;
    }
    let r2 = radius * radius;
    r2.powi(order as i32) / (order as f64 * (1.0 - r2))
}

/// Smallest K with `tail_bound(radius, K) <= tol`.
pub fn required_order(radius: f64, tol: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&radius) {
        return Err(Error::OutsideDisc(radius));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tail tolerance must be positive".into()));
    }
    let mut k = 1usize;
    while tail_bound(radius, k) > tol {
        k += 1;
    }
    Ok(k)
}

fn check_tail(sample: &LimitSample, z: Complex64) -> Result<()> {
    let r = z.norm();
    if !(r < 1.0) {
        return Err(Error::OutsideDisc(r));
    }
    if tail_bound(r, sample.order) > TAIL_TOL {
        return Err(Error::TailBudget {
            radius: r,
            have: sample.order,
            required: required_order(r, TAIL_TOL)?,
        });
    }
    Ok(())
}

/// Truncated `F(z) = sum_{k <= K} X_k z^k / sqrt k`; refuses when the
/// truncation tail is not negligible at `|z|`.
pub fn eval_f(sample: &LimitSample, z: Complex64) -> Result<Complex64> {
    check_tail(sample, z)?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for (k, &xk) in sample.x.iter().enumerate() {
        zk *= z;
        acc += xk * zk / ((k + 1) as f64).sqrt();
    }
    Ok(acc)
}

/// `kappa(z) exp(-F(z))`.
pub fn eval_limit(sample: &LimitSample, z: Complex64) -> Result<Complex64> {
    Ok(kappa(sample.tau, z)? * (-eval_f(sample, z)?).exp())
}

/// Maclaurin coefficients `c_0..c_K` of `kappa exp(-F)`: the Newton recurrence
/// fed with `sqrt(k) X_k + mean_k`, exactly as for finite-n traces.
pub fn limit_coeffs(sample: &LimitSample, means: &MeanSequence, order: usize) -> Result<CoefficientSeries> {
    if order == 0 || sample.order < order || means.values.len() < order {
        return Err(Error::InvalidArgument(format!(
            "limit coefficients to order {order} need at least that many X_k and means \
             (have {} and {})",
            sample.order,
            means.values.len()
        )));
    }
    let traces: Vec<Complex64> = (1..=order)
        .map(|k| sample.x[k - 1] * (k as f64).sqrt() + means.values[k - 1])
        .collect();
    newton_coeffs(&traces)
}
