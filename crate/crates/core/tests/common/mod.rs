//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's numerical routines.
#![allow(dead_code)]

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Determinant by cofactor expansion along the first row (k <= 5 or so).
pub fn det_laplace<T>(m: &[T], k: usize, one: T) -> T
where
    T: Copy + Default + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    match k {
        0 => one,
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        _ => {
            let mut acc = T::default();
            let mut sub = Vec::with_capacity((k - 1) * (k - 1));
            for col in 0..k {
                sub.clear();
                for r in 1..k {
                    for cc in 0..k {
                        if cc != col {
                            sub.push(m[r * k + cc]);
                        }
                    }
                }
                let term = m[col] * det_laplace(&sub, k - 1, one);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// `S_k = sum_{|I| = k} det A(I)` for k = 0..=n, A row-major n x n.
pub fn minor_sums<T>(a: &[T], n: usize, one: T) -> Vec<T>
where
    T: Copy + Default + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let mut sums = vec![T::default(); n + 1];
    let mut sub = Vec::new();
    for mask in 0u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let k = idx.len();
        sub.clear();
        for &i in &idx {
            for &j in &idx {
                sub.push(a[i * n + j]);
            }
        }
        sums[k] = sums[k] + det_laplace(&sub, k, one);
    }
    sums
}

/// Calls `f` on every n x n matrix with +-1 entries.
pub fn for_each_sign_matrix(n: usize, mut f: impl FnMut(&[i64])) {
    let cells = n * n;
    let mut m = vec![0i64; cells];
    for bits in 0u64..(1u64 << cells) {
        for (i, x) in m.iter_mut().enumerate() {
            *x = if bits >> i & 1 == 1 { -1 } else { 1 };
        }
        f(&m);
    }
}

/// Calls `f(matrix, probability)` on every n x n matrix with entries from
/// the atoms of a finitely supported law.
pub fn for_each_matrix(atoms: &[(Complex64, f64)], n: usize, f: impl FnMut(&[Complex64], f64)) {
    for_each_tuple(atoms, n * n, f);
}

/// Calls `f(values, probability)` on every iid tuple of `len` atoms.
pub fn for_each_tuple(atoms: &[(Complex64, f64)], len: usize, mut f: impl FnMut(&[Complex64], f64)) {
    let mut digits = vec![0usize; len];
    let mut m = vec![atoms[0].0; len];
    loop {
        let mut p = 1.0;
        for (i, &d) in digits.iter().enumerate() {
            m[i] = atoms[d].0;
            p *= atoms[d].1;
        }
        f(&m, p);
        let mut pos = 0;
        loop {
            if pos == len {
                return;
            }
            digits[pos] += 1;
            if digits[pos] < atoms.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// `E[f(A)]` over all matrices of a finitely supported law.
pub fn expectation(atoms: &[(Complex64, f64)], n: usize, f: impl Fn(&[Complex64]) -> Complex64) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    for_each_matrix(atoms, n, |m, p| acc += f(m) * p);
    acc
}

/// Sum over all k-tuples of distinct indices of the closed walk product,
/// divided by k: the k-cycle sum `t_k`.
pub fn cycle_sum(a: &[Complex64], n: usize, k: usize) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    let mut idx = vec![0usize; k];
    walk_tuples(n, k, &mut idx, 0, &mut |t| {
        let mut distinct = true;
        for i in 0..k {
            for j in 0..i {
                distinct &= t[i] != t[j];
            }
        }
        if distinct {
            acc += (0..k).map(|i| a[t[i] * n + t[(i + 1) % k]]).product::<Complex64>();
        }
    });
    acc / k as f64
}

/// `Tr(A^k)` as a sum over closed walks.
pub fn trace_power(a: &[Complex64], n: usize, k: usize) -> Complex64 {
    let mut acc = c(0.0, 0.0);
    let mut idx = vec![0usize; k];
    walk_tuples(n, k, &mut idx, 0, &mut |t| {
        acc += (0..k).map(|i| a[t[i] * n + t[(i + 1) % k]]).product::<Complex64>();
    });
    acc
}

fn walk_tuples(n: usize, k: usize, idx: &mut [usize], depth: usize, f: &mut impl FnMut(&[usize])) {
    if depth == k {
        f(idx);
        return;
    }
    for v in 0..n {
        idx[depth] = v;
        walk_tuples(n, k, idx, depth + 1, f);
    }
}

/// `(2m - 1)!!` with `(-1)!! = 1`.
pub fn double_factorial_odd(m: u32) -> f64 {
    (1..=m).map(|i| (2 * i - 1) as f64).product()
}

/// `E[X^a conj(X)^b]` for a centered complex Gaussian with `E|X|^2 = 1` and
/// `E X^2 = w`, by binomial expansion of `X = e^{i phi}(U + iV)` with
/// independent real parts of variances `(1 + |w|)/2` and `(1 - |w|)/2`.
pub fn complex_gaussian_moment(w: Complex64, a: u32, b: u32) -> Complex64 {
    let r = w.norm();
    let phi = if r > 0.0 { w.arg() / 2.0 } else { 0.0 };
    let su = ((1.0 + r) / 2.0).sqrt();
    let sv = ((1.0 - r) / 2.0).sqrt();
    let real_moment = |p: u32, s: f64| if p % 2 == 1 { 0.0 } else { double_factorial_odd(p / 2) * s.powi(p as i32) };
    let binom = |n: u32, k: u32| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let i = c(0.0, 1.0);
    let mut acc = c(0.0, 0.0);
    // (U + iV)^a (U - iV)^b
    for j in 0..=a {
        for l in 0..=b {
            let pu = (a - j) + (b - l);
            let pv = j + l;
            let coeff = binom(a, j) * binom(b, l) * i.powu(j) * (-i).powu(l);
            acc += coeff * real_moment(pu, su) * real_moment(pv, sv);
        }
    }
    acc * Complex64::from_polar(1.0, phi * (a as f64 - b as f64))
}
