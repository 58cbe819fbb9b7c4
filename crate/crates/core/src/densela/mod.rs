//! Dense complex linear algebra: determinants, traces of powers, eigenvalues,
//! spectral radius and operator norm.

mod eigen;
mod lu;
mod norm;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use eigen::{eigenvalues, eigenvalues_with, EigenOptions, Spectrum};
pub use lu::{det_identity_minus, determinant};
pub(crate) use lu::determinant_in_place as lu_determinant_buffer;
pub use norm::{operator_norm, operator_norm_with, PowerOptions};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// A numerical result carrying a convergence flag instead of failing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flagged<T> {
    pub value: T,
    pub converged: bool,
}

impl<T> Flagged<T> {
    pub fn ok(value: T) -> Self {
        Self {
            value,
            converged: true,
        }
    }

    pub fn unconverged(value: T) -> Self {
        Self {
            value,
            converged: false,
        }
    }
}

/// `(Tr A, Tr A^2, ..., Tr A^kmax)` by repeated multiplication.
pub fn traces_of_powers(a: &ComplexMatrix, kmax: usize) -> Result<Vec<Complex64>> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(kmax);
    out.push(a.trace());
    let mut power = a.clone();
    for k in 2..=kmax {
        if k == kmax {
            // the last trace only needs the diagonal of power * a
            let n = a.dim();
            let t = (0..n)
                .map(|i| power.row(i).iter().enumerate().map(|(j, &x)| x * a[(j, i)]).sum::<Complex64>())
                .sum();
            out.push(t);
        } else {
            power = power.matmul(a);
            out.push(power.trace());
        }
    }
    Ok(out)
}

/// `max |lambda|` over the spectrum.
pub fn spectral_radius(a: &ComplexMatrix) -> Flagged<f64> {
    let s = eigenvalues(a);
    Flagged {
        value: s.spectral_radius(),
        converged: s.converged,
    }
}
