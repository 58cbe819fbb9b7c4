//! Eigenvalues of dense complex non-Hermitian matrices.
//!
//! Pipeline: diagonal balancing, reduction to upper Hessenberg form by
//! Householder reflections, then single-shift complex QR sweeps (implicit
//! bulge chasing with Givens rotations) on the active window. Only
//! eigenvalues are computed, so rotations are confined to the unreduced
//! block and no Schur vectors are accumulated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    /// A subdiagonal entry is dropped once it falls below this fraction of
    /// the adjacent diagonal moduli.
    pub deflation_tol: f64,
    /// QR sweeps allowed before an eigenvalue is declared unconverged.
    pub max_iter_per_eigenvalue: usize,
    pub balance: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            deflation_tol: 1e-12,
            max_iter_per_eigenvalue: 40,
            balance: true,
        }
    }
}

/// All eigenvalues of a matrix, with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// False when some window ran out of iterations; its diagonal is then
    /// reported as is.
    pub converged: bool,
    /// Largest dropped subdiagonal entry relative to the matrix scale.
    pub residual: f64,
}

impl Spectrum {
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.eigenvalues.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.eigenvalues.iter().product()
    }

    /// `sum_i lambda_i^k` for k = 1..=kmax.
    pub fn power_sums(&self, kmax: usize) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); kmax];
        for &lam in &self.eigenvalues {
            let mut p = Complex64::new(1.0, 0.0);
            for slot in acc.iter_mut() {
                p *= lam;
                *slot += p;
            }
        }
        acc
    }
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

pub fn eigenvalues(a: &ComplexMatrix) -> Spectrum {
    eigenvalues_with(a, &EigenOptions::default())
}

pub fn eigenvalues_with(a: &ComplexMatrix, opts: &EigenOptions) -> Spectrum {
    let n = a.dim();
    let mut h = a.as_slice().to_vec();
    if n == 0 {
        return Spectrum {
            eigenvalues: vec![],
            converged: true,
            residual: 0.0,
        };
    }
    if opts.balance {
        balance(&mut h, n);
    }
    reduce_to_hessenberg(&mut h, n);
    hessenberg_qr(&mut h, n, opts)
}

/// Diagonal similarity by powers of two that equalizes row and column norms.
fn balance(h: &mut [Complex64], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += cabs1(h[j * n + i]);
                    r += cabs1(h[i * n + j]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    h[i * n + j] *= inv;
                }
                for j in 0..n {
                    h[j * n + i] *= f;
                }
            }
        }
    }
}

/// Householder reduction `H = Q^H A Q` to upper Hessenberg form, in place.
fn reduce_to_hessenberg(h: &mut [Complex64], n: usize) {
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut s = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let v = &mut v[..len];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = h[(k + 1 + i) * n + k];
        }
        let tail: f64 = v[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let norm = (tail + v[0].norm_sqr()).sqrt();
        let phase = if v[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        let alpha = -phase * norm;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;

        // left: rows k+1.., columns k..
        let s = &mut s[k..n];
        s.iter_mut().for_each(|x| *x = zero);
        for (i, &vi) in v.iter().enumerate() {
            let row = &h[(k + 1 + i) * n + k..(k + 2 + i) * n];
            let cv = vi.conj();
            for (acc, &x) in s.iter_mut().zip(row) {
                *acc += cv * x;
            }
        }
        for (i, &vi) in v.iter().enumerate() {
            let row = &mut h[(k + 1 + i) * n + k..(k + 2 + i) * n];
            let f = vi * beta;
            for (x, &acc) in row.iter_mut().zip(s.iter()) {
                *x -= f * acc;
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let row = &mut h[i * n + k + 1..(i + 1) * n];
            let dot: Complex64 = row.iter().zip(v.iter()).map(|(&x, &vl)| x * vl).sum();
            let f = dot * beta;
            for (x, &vl) in row.iter_mut().zip(v.iter()) {
                *x -= f * vl.conj();
            }
        }
        h[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            h[i * n + k] = zero;
        }
    }
}

/// Rotation `[c s; -conj(s) c]` with real `c` mapping `(x, y)` to `(r, 0)`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64, Complex64) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0), x);
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay, Complex64::new(ay, 0.0));
    }
    let r = ax.hypot(ay);
    let phase = x / ax;
    (ax / r, phase * y.conj() / r, phase * r)
}

/// Both eigenvalues of `[[a, b], [c, d]]`; the first is the one closer to `d`.
fn eig2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    // d + p +- disc; pick the root whose denominator avoids cancellation
    let denom = if (p + disc).norm() >= (p - disc).norm() {
        p + disc
    } else {
        p - disc
    };
    if denom.norm() == 0.0 {
        return (d, a);
    }
    let near = d - bc / denom;
    let far = a + d - near;
    (near, far)
}

fn hessenberg_qr(h: &mut [Complex64], n: usize, opts: &EigenOptions) -> Spectrum {
    let zero = Complex64::new(0.0, 0.0);
    let scale = h.iter().map(|&z| cabs1(z)).fold(0.0, f64::max);
    let floor = f64::MIN_POSITIVE * (n as f64);
    let mut eig = vec![zero; n];
    let mut converged = true;
    let mut residual: f64 = 0.0;
    let tol = opts.deflation_tol;

    let mut hi = n as isize - 1;
    while hi >= 0 {
        let ihi = hi as usize;
        let mut its = 0usize;
        loop {
            // locate the start of the unreduced block ending at ihi
            let mut l = ihi;
            while l > 0 {
                let sub = cabs1(h[l * n + l - 1]);
                let mut tst = cabs1(h[(l - 1) * n + l - 1]) + cabs1(h[l * n + l]);
                if tst == 0.0 {
                    tst = scale;
                }
                if sub <= tol * tst || sub <= floor {
                    if scale > 0.0 {
                        residual = residual.max(sub / scale);
                    }
                    h[l * n + l - 1] = zero;
                    break;
                }
                l -= 1;
            }
            if l == ihi {
                eig[ihi] = h[ihi * n + ihi];
                hi -= 1;
                break;
            }
            if l + 1 == ihi {
                let (e1, e2) = eig2x2(
                    h[l * n + l],
                    h[l * n + ihi],
                    h[ihi * n + l],
                    h[ihi * n + ihi],
                );
                eig[ihi] = e1;
                eig[l] = e2;
                hi -= 2;
                break;
            }
            if its >= opts.max_iter_per_eigenvalue {
                converged = false;
                for i in l..=ihi {
                    eig[i] = h[i * n + i];
                }
                hi = l as isize - 1;
                break;
            }
            let shift = if its > 0 && its % 10 == 0 {
                // exceptional shift to break cycling (e.g. permutation matrices)
                let (row, col) = if (its / 10) % 2 == 1 { (l + 1, l) } else { (ihi, ihi - 1) };
                h[row * n + row] + 0.75 * h[row * n + col].re.abs()
            } else {
                eig2x2(
                    h[(ihi - 1) * n + ihi - 1],
                    h[(ihi - 1) * n + ihi],
                    h[ihi * n + ihi - 1],
                    h[ihi * n + ihi],
                )
                .0
            };
            qr_sweep(h, n, l, ihi, shift);
            its += 1;
        }
    }
    Spectrum {
        eigenvalues: eig,
        converged,
        residual,
    }
}

/// One implicit single-shift QR step on the window `l..=hi`.
fn qr_sweep(h: &mut [Complex64], n: usize, l: usize, hi: usize, shift: Complex64) {
    let mut x = h[l * n + l] - shift;
    let mut y = h[(l + 1) * n + l];
    for k in l..hi {
        if k > l {
            x = h[k * n + k - 1];
            y = h[(k + 1) * n + k - 1];
        }
        let (c, s, r) = givens(x, y);
        if k > l {
            h[k * n + k - 1] = r;
            h[(k + 1) * n + k - 1] = Complex64::new(0.0, 0.0);
        }
        let sc = s.conj();
        {
            let (top, bottom) = h.split_at_mut((k + 1) * n);
            let rk = &mut top[k * n + k..k * n + hi + 1];
            let rk1 = &mut bottom[k..hi + 1];
            for (a, b) in rk.iter_mut().zip(rk1.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u * c + s * v;
                *b = v * c - sc * u;
            }
        }
        let last = (k + 2).min(hi);
        for i in l..=last {
            let base = i * n + k;
            let (u, v) = (h[base], h[base + 1]);
            h[base] = u * c + sc * v;
            h[base + 1] = v * c - s * u;
        }
    }
}
