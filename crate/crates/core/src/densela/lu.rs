use num_complex::Complex64;

use crate::matrix::ComplexMatrix;

/// Determinant by LU factorization with partial pivoting on the modulus.
///
/// Singular input yields zero (up to rounding); there is no error path.
pub fn determinant(a: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    let mut lu = a.as_slice().to_vec();
    determinant_in_place(&mut lu, n)
}

/// `det(I - z A)`; the workhorse behind pointwise evaluation of q_n at large n.
pub fn det_identity_minus(a: &ComplexMatrix, z: Complex64) -> Complex64 {
    let n = a.dim();
    let mut m: Vec<Complex64> = a.as_slice().iter().map(|&x| -z * x).collect();
    for i in 0..n {
        m[i * n + i] += 1.0;
    }
    determinant_in_place(&mut m, n)
}

pub(crate) fn determinant_in_place(m: &mut [Complex64], n: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (piv, piv_abs) = (k..n)
            .map(|i| (i, m[i * n + k].norm_sqr()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            for j in 0..n {
                m.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let pivot = m[k * n + k];
        det *= pivot;
        let inv = pivot.inv();
        let (head, tail) = m.split_at_mut((k + 1) * n);
        let pivot_row = &head[k * n + k + 1..k * n + n];
        for row in tail.chunks_exact_mut(n) {
            let f = row[k] * inv;
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for (x, &p) in row[k + 1..].iter_mut().zip(pivot_row) {
                *x -= f * p;
            }
        }
    }
    det
}
