//! The reciprocal characteristic polynomial `q_n(z) = det(1 - z A / sqrt n)`.
//!
//! Its Maclaurin coefficients are computed two independent ways: by summing
//! principal minors, and by the Newton recurrence on normalized traces of
//! powers. Coefficient `c_k` always stores `(-1)^k P_k`, so that
//! `q_n(z) = sum_k c_k z^k`.

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use twofloat::TwoFloat;

use crate::densela::{det_identity_minus, lu_determinant_buffer, traces_of_powers};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Largest `C(n, k)` over `k <= kmax` that minor enumeration accepts.
pub const MINOR_BUDGET: f64 = 1e6;

/// Tolerance for coefficients past degree n when the trace route overshoots.
pub const DEGREE_TOL: f64 = 1e-8;

/// Coefficients `c_0..c_K` of `z -> sum_k c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    pub coeffs: Vec<Complex64>,
}

impl CoefficientSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// Highest stored order K.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Largest modulus among coefficients of order > `degree`.
    pub fn tail_beyond(&self, degree: usize) -> f64 {
        self.coeffs
            .iter()
            .skip(degree + 1)
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CoefficientSeries) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or(zero);
                let b = other.coeffs.get(k).copied().unwrap_or(zero);
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

impl Serialize for CoefficientSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoefficientSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(Self::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Next k-subset of `0..n` in colexicographic order (Gosper's hack).
fn next_combination(mask: u64) -> u64 {
    let low = mask & mask.wrapping_neg();
    let ripple = mask + low;
    (((ripple ^ mask) >> 2) / low) | ripple
}

/// `c_k = (-1)^k sum_{|I| = k} n^{-k/2} det A(I)` for k <= kmax, by explicit
/// enumeration of principal minors.
pub fn minor_sum_coeffs(a: &ComplexMatrix, kmax: usize) -> Result<CoefficientSeries> {
    let n = a.dim();
    if kmax < 1 || kmax > n {
        return Err(Error::InvalidArgument(format!(
            "kmax must lie in 1..={n}, got {kmax}"
        )));
    }
    let widest = (1..=kmax).map(|k| binomial(n, k)).fold(0.0, f64::max);
    if widest > MINOR_BUDGET || n > 63 {
        return Err(Error::BudgetExceeded {
            what: "principal minor enumeration",
            required: widest,
            budget: MINOR_BUDGET,
        });
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut idx = Vec::with_capacity(kmax);
    let mut buf = Vec::with_capacity(kmax * kmax);
    for k in 1..=kmax {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut mask: u64 = (1u64 << k) - 1;
        let limit = 1u64 << n;
        while mask < limit {
            idx.clear();
            idx.extend((0..n).filter(|&i| mask >> i & 1 == 1));
            buf.clear();
            for &i in &idx {
                buf.extend(idx.iter().map(|&j| a[(i, j)]));
            }
            sum += lu_determinant_buffer(&mut buf, k);
            mask = next_combination(mask);
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(sum * sign * scale.powi(k as i32));
    }
    Ok(CoefficientSeries::new(coeffs))
}

/// Exponentiates `-sum_k t_k z^k / k` by the Newton recurrence
/// `c_k = -(1/k) sum_{j=1..k} t_j c_{k-j}`, where `t_k` is the k-th
/// normalized trace (or power sum).
pub fn newton_coeffs(traces: &[Complex64]) -> Result<CoefficientSeries> {
    if traces.is_empty() {
        return Err(Error::InvalidArgument("need at least one trace".into()));
    }
    let kmax = traces.len();
    let mut c = Vec::with_capacity(kmax + 1);
    c.push(Complex64::new(1.0, 0.0));
    for k in 1..=kmax {
        let s: Complex64 = (1..=k).map(|j| traces[j - 1] * c[k - j]).sum();
        c.push(-s / k as f64);
    }
    Ok(CoefficientSeries::new(c))
}

/// Newton coefficients of `prod_i (1 - z lambda_i)` up to order `kmax`, with
/// power sums and recurrence carried in double-double arithmetic.
///
/// Power sums grow like `max |lambda|^k`, so in plain `f64` the coefficients
/// past degree `n` only cancel to about `eps * max |lambda|^n`. The extra
/// precision keeps that residual below `DEGREE_TOL` for `n` up to a few
/// thousand when `max |lambda|` stays near one.
pub fn newton_coeffs_from_eigenvalues(eigenvalues: &[Complex64], kmax: usize) -> Result<CoefficientSeries> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("need at least one power sum".into()));
    }
    type Dd = Complex<TwoFloat>;
    let zero = Dd::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
    let lift = |z: Complex64| Dd::new(TwoFloat::from(z.re), TwoFloat::from(z.im));
    let mut sums = vec![zero; kmax];
    for &lam in eigenvalues {
        let lam = lift(lam);
        let mut p = lift(Complex64::new(1.0, 0.0));
        for slot in sums.iter_mut() {
            p = p * lam;
            *slot = *slot + p;
        }
    }
    let mut c = Vec::with_capacity(kmax + 1);
    c.push(lift(Complex64::new(1.0, 0.0)));
    for k in 1..=kmax {
        let s = (1..=k).fold(zero, |acc, j| acc + sums[j - 1] * c[k - j]);
        // TwoFloat / f64 is exact to double-double precision; TwoFloat / TwoFloat is not
        let k = k as f64;
        c.push(Dd::new(-s.re / k, -s.im / k));
    }
    let down = |z: &Dd| Complex64::new(f64::from(z.re), f64::from(z.im));
    Ok(CoefficientSeries::new(c.iter().map(down).collect()))
}

/// Largest Newton coefficient past degree `n` for the eigenvalues shrunk into
/// the closed unit disc by `max(1, max |lambda|)`; zero in exact arithmetic.
/// Without the shrink the residual scales like `max |lambda|^n` and no fixed
/// tolerance applies to heavy-tailed spectra.
pub fn degree_residual(eigenvalues: &[Complex64]) -> Result<f64> {
    let n = eigenvalues.len();
    let scale = eigenvalues.iter().map(|l| l.norm()).fold(1.0, f64::max);
    let shrunk: Vec<Complex64> = eigenvalues.iter().map(|l| l / scale).collect();
    Ok(newton_coeffs_from_eigenvalues(&shrunk, n + 2)?.tail_beyond(n))
}

/// Coefficients of `q_n` for the matrix `A` (unnormalized) through the trace
/// route, up to order `kmax`. When `kmax > n` the overshoot must vanish.
pub fn qn_coeffs(a: &ComplexMatrix, kmax: usize) -> Result<CoefficientSeries> {
    let traces = traces_of_powers(&a.normalized(), kmax)?;
    let series = newton_coeffs(&traces)?;
    let tail = series.tail_beyond(a.dim());
    if tail > DEGREE_TOL {
        return Err(Error::Experiment(format!(
            "coefficients past degree {} do not vanish (max {tail:e})",
            a.dim()
        )));
    }
    Ok(series)
}

/// Horner evaluation of a coefficient series.
pub fn eval_qn(series: &CoefficientSeries, z: Complex64) -> Complex64 {
    series.eval(z)
}

/// `q_n(z) = prod_i (1 - z lambda_i)` from eigenvalues of `A / sqrt n`.
pub fn eval_qn_from_eigenvalues(eigenvalues: &[Complex64], z: Complex64) -> Complex64 {
    eigenvalues.iter().map(|&l| 1.0 - z * l).product()
}

/// `q_n(z)` as a determinant of `1 - z A / sqrt n`; exact at every degree.
pub fn eval_qn_det(a: &ComplexMatrix, z: Complex64) -> Complex64 {
    let scale = 1.0 / (a.dim() as f64).sqrt();
    det_identity_minus(a, z * scale)
}
