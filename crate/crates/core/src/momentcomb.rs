//! Mixed moments of normalized cycle sums `t_k / n^{k/2}`: exact expectations
//! at finite n by enumeration, their Gaussian limit by pair partitions, and the
//! mean of the repeated-index part `r_k` of `Tr(A^k)`.

use std::fmt;
use std::str::FromStr;

use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::EntryDistribution;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Largest `n^k` (for [`split_trace`]) or `n^{sum k}` (for
/// [`exact_trace_moment`]) accepted for brute-force enumeration.
pub const ENUMERATION_BUDGET: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "p")]
    Plain,
    #[serde(rename = "c")]
    Conj,
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "p" | "plain" | "." => Ok(Sign::Plain),
            "c" | "conj" | "*" => Ok(Sign::Conj),
            other => Err(Error::InvalidArgument(format!("sign must be `p` or `c`, got `{other}`"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plain => "p",
            Sign::Conj => "c",
        })
    }
}

/// A product `prod_i (t_{k_i} / n^{k_i/2})^{s_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MomentQuery {
    ks: Vec<usize>,
    signs: Vec<Sign>,
}

impl MomentQuery {
    pub fn new(ks: Vec<usize>, signs: Vec<Sign>) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::InvalidArgument("a moment query needs at least one factor".into()));
        }
        if ks.len() != signs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} cycle lengths but {} signs",
                ks.len(),
                signs.len()
            )));
        }
        if ks.contains(&0) {
            return Err(Error::InvalidArgument("cycle lengths must be at least 1".into()));
        }
        Ok(Self { ks, signs })
    }

    /// Parses the comma-separated forms `1,2,2` and `p,c,p`.
    pub fn parse(ks: &str, signs: &str) -> Result<Self> {
        let ks = ks
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad cycle length `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let signs = signs.split(',').map(str::parse).collect::<Result<Vec<_>>>()?;
        Self::new(ks, signs)
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    pub fn total_order(&self) -> usize {
        self.ks.iter().sum()
    }

    /// Every query with at most `max_factors` factors and `sum k <= max_order`,
    /// over all sign patterns. Lengths are listed as compositions, so
    /// `(1, 2)` and `(2, 1)` both appear.
    pub fn battery(max_factors: usize, max_order: usize) -> Vec<MomentQuery> {
        fn compositions(m: usize, budget: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == m {
                out.push(prefix.clone());
                return;
            }
            let left = m - prefix.len() - 1;
            for k in 1..=budget.saturating_sub(left) {
                prefix.push(k);
                compositions(m, budget - k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        for m in 1..=max_factors {
            let mut ks_list = Vec::new();
            compositions(m, max_order, &mut Vec::new(), &mut ks_list);
            for ks in ks_list {
                for mask in 0..(1u32 << m) {
                    let signs = (0..m)
                        .map(|i| if mask >> i & 1 == 1 { Sign::Conj } else { Sign::Plain })
                        .collect();
                    out.push(MomentQuery { ks: ks.clone(), signs });
                }
            }
        }
        out
    }
}

impl fmt::Display for MomentQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        let signs: Vec<String> = self.signs.iter().map(|s| s.to_string()).collect();
        write!(f, "ks={} signs={}", ks.join(","), signs.join(","))
    }
}

/// `E[a^p conj(a)^q]` for `p + q <= order`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    order: usize,
    values: Vec<Complex64>,
}

impl MomentTable {
    pub fn from_distribution(dist: &EntryDistribution, order: usize) -> Result<Self> {
        let stride = order + 1;
        let mut values = vec![Complex64::new(0.0, 0.0); stride * stride];
        for p in 0..=order {
            for q in 0..=order - p {
                values[p * stride + q] = dist.moment(p as u32, q as u32)?;
            }
        }
        Ok(Self { order, values })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, p: usize, q: usize) -> Option<Complex64> {
        (p + q <= self.order).then(|| self.values[p * (self.order + 1) + q])
    }

    /// The table as Gaussian integers, when every entry is one.
    fn integral(&self) -> Option<Vec<Complex<i128>>> {
        const EXACT: f64 = 9.007_199_254_740_992e15;
        let to_int = |x: f64| (x.fract() == 0.0 && x.abs() < EXACT).then_some(x as i128);
        self.values
            .iter()
            .map(|z| Some(Complex::new(to_int(z.re)?, to_int(z.im)?)))
            .collect()
    }
}

fn cycle_budget(n: usize, k: usize) -> Result<()> {
    let required = (n as f64).powi(k as i32);
    if required > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "cycle enumeration",
            required,
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

/// Directed k-cycles on `0..n` in canonical rotation (smallest vertex first),
/// each given by its vertex sequence.
fn canonical_cycles(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, k: usize, path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if path.len() == k {
            out.push(path.clone());
            return;
        }
        for v in path[0] + 1..n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                extend(n, k, path, used, out);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    for first in 0..n {
        used[first] = true;
        extend(n, k, &mut vec![first], &mut used, &mut out);
        used[first] = false;
    }
    out
}

fn cycle_edges(cycle: &[usize], n: usize) -> Vec<usize> {
    (0..cycle.len())
        .map(|i| cycle[i] * n + cycle[(i + 1) % cycle.len()])
        .collect()
}

/// `(t_k, r_k)` by listing every directed k-cycle.
pub fn split_trace_enumerated(a: &ComplexMatrix, k: usize) -> Result<(Complex64, Complex64)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = a.dim();
    cycle_budget(n, k)?;
    let data = a.as_slice();
    let t: Complex64 = canonical_cycles(n, k)
        .iter()
        .map(|c| cycle_edges(c, n).iter().map(|&e| data[e]).product::<Complex64>())
        .sum();
    let trace = crate::densela::traces_of_powers(a, k)?[k - 1];
    Ok((t, trace - t * k as f64))
}

/// Splits `Tr(A^k) = k t_k + r_k`, where `t_k` sums the directed k-cycles of
/// distinct vertices. Closed forms cover `k <= 4`; longer cycles are listed.
pub fn split_trace(a: &ComplexMatrix, k: usize) -> Result<(Complex64, Complex64)> {
    let n = a.dim();
    let zero = Complex64::new(0.0, 0.0);
    let diag: Vec<Complex64> = (0..n).map(|i| a[(i, i)]).collect();
    match k {
        1 => Ok((a.trace(), zero)),
        2 => {
            let r: Complex64 = diag.iter().map(|d| d * d).sum();
            let tr2 = crate::densela::traces_of_powers(a, 2)?[1];
            Ok(((tr2 - r) / 2.0, r))
        }
        3 => {
            let a2 = a.matmul(a);
            let tr3: Complex64 = (0..n).map(|i| (0..n).map(|j| a2[(i, j)] * a[(j, i)]).sum::<Complex64>()).sum();
            let r = (0..n).map(|i| diag[i] * a2[(i, i)]).sum::<Complex64>() * 3.0
                - diag.iter().map(|d| d * d * d).sum::<Complex64>() * 2.0;
            Ok(((tr3 - r) / 3.0, r))
        }
        4 => {
            // Mobius inversion over the coincidence patterns of the closed walk
            let a2 = a.matmul(a);
            let a3 = a2.matmul(a);
            let tr4: Complex64 = (0..n).map(|i| (0..n).map(|j| a2[(i, j)] * a2[(j, i)]).sum::<Complex64>()).sum();
            let s_a3: Complex64 = (0..n).map(|i| diag[i] * a3[(i, i)]).sum();
            let s_a2a2: Complex64 = (0..n).map(|i| a2[(i, i)] * a2[(i, i)]).sum();
            let s_dda2: Complex64 = (0..n).map(|i| diag[i] * diag[i] * a2[(i, i)]).sum();
            let mut s_ddx = zero;
            let mut s_xx = zero;
            for i in 0..n {
                for j in 0..n {
                    let x = a[(i, j)] * a[(j, i)];
                    s_ddx += diag[i] * diag[j] * x;
                    s_xx += x * x;
                }
            }
            let s_d4: Complex64 = diag.iter().map(|d| d * d * d * d).sum();
            let distinct = tr4 - s_a3 * 4.0 - s_a2a2 * 2.0 + s_dda2 * 8.0 + s_ddx * 2.0 + s_xx - s_d4 * 6.0;
            Ok((distinct / 4.0, tr4 - distinct))
        }
        _ => split_trace_enumerated(a, k),
    }
}

trait Ring: Copy + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(self, other: Self) -> Option<Self>;
    fn add(self, other: Self) -> Option<Self>;
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn mul(self, other: Self) -> Option<Self> {
        Some(self * other)
    }
    fn add(self, other: Self) -> Option<Self> {
        Some(self + other)
    }
}

impl Ring for Complex<i128> {
    fn zero() -> Self {
        Complex::new(0, 0)
    }
    fn one() -> Self {
        Complex::new(1, 0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }
    fn mul(self, o: Self) -> Option<Self> {
        let re = self.re.checked_mul(o.re)?.checked_sub(self.im.checked_mul(o.im)?)?;
        let im = self.re.checked_mul(o.im)?.checked_add(self.im.checked_mul(o.re)?)?;
        Some(Complex::new(re, im))
    }
    fn add(self, o: Self) -> Option<Self> {
        Some(Complex::new(self.re.checked_add(o.re)?, self.im.checked_add(o.im)?))
    }
}

/// Per-edge `(p, q)` counts with a stack of edges currently in use.
struct EdgeCounts {
    counts: Vec<(usize, usize)>,
    active: Vec<usize>,
}

impl EdgeCounts {
    fn new(edges: usize) -> Self {
        Self {
            counts: vec![(0, 0); edges],
            active: Vec::new(),
        }
    }

    fn push(&mut self, e: usize, sign: Sign) {
        let c = &mut self.counts[e];
        if *c == (0, 0) {
            self.active.push(e);
        }
        match sign {
            Sign::Plain => c.0 += 1,
            Sign::Conj => c.1 += 1,
        }
    }

    fn pop(&mut self, e: usize, sign: Sign) {
        let c = &mut self.counts[e];
        match sign {
            Sign::Plain => c.0 -= 1,
            Sign::Conj => c.1 -= 1,
        }
        if *c == (0, 0) {
            debug_assert_eq!(self.active.last(), Some(&e));
            self.active.pop();
        }
    }
}

struct MomentWalk<'a, T> {
    factors: &'a [(Vec<Vec<usize>>, Sign)],
    table: &'a [T],
    stride: usize,
}

impl<T: Ring> MomentWalk<'_, T> {
    fn leaf(&self, state: &EdgeCounts) -> Option<T> {
        let mut prod = T::one();
        for &e in &state.active {
            let (p, q) = state.counts[e];
            let v = self.table[p * self.stride + q];
            if v.is_zero() {
                return Some(T::zero());
            }
            prod = prod.mul(v)?;
        }
        Some(prod)
    }

    fn descend(&self, depth: usize, state: &mut EdgeCounts, acc: &mut T) -> Option<()> {
        if depth == self.factors.len() {
            *acc = acc.add(self.leaf(state)?)?;
            return Some(());
        }
        let (cycles, sign) = &self.factors[depth];
        for edges in cycles {
            edges.iter().for_each(|&e| state.push(e, *sign));
            let r = self.descend(depth + 1, state, acc);
            edges.iter().rev().for_each(|&e| state.pop(e, *sign));
            r?;
        }
        Some(())
    }

    /// Sum over all cycle tuples, split on the first factor and combined by a
    /// fixed pairwise tree so the result does not depend on scheduling.
    fn total(&self, n: usize) -> Option<T> {
        let (first, sign) = &self.factors[0];
        let partials: Vec<Option<T>> = first
            .par_iter()
            .map(|edges| {
                let mut state = EdgeCounts::new(n * n);
                edges.iter().for_each(|&e| state.push(e, *sign));
                let mut acc = T::zero();
                self.descend(1, &mut state, &mut acc)?;
                Some(acc)
            })
            .collect();
        let mut level: Vec<T> = partials.into_iter().collect::<Option<_>>()?;
        while level.len() > 1 {
            level = level
                .chunks(2)
                .map(|c| if c.len() == 2 { c[0].add(c[1]) } else { Some(c[0]) })
                .collect::<Option<_>>()?;
        }
        Some(level.pop().unwrap_or_else(T::zero))
    }
}

/// `E[prod_i (t_{k_i} / n^{k_i/2})^{s_i}]` at finite n, exactly: the product of
/// cycle sums is expanded and each monomial's expectation factorizes over its
/// distinct directed edges.
///
/// Integer-valued moment tables are summed in exact integer arithmetic.
pub fn exact_trace_moment(query: &MomentQuery, n: usize, dist: &EntryDistribution) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let order = query.total_order();
    cycle_budget(n, order)?;
    let table = MomentTable::from_distribution(dist, order)?;
    let factors: Vec<(Vec<Vec<usize>>, Sign)> = query
        .ks
        .iter()
        .zip(&query.signs)
        .map(|(&k, &s)| {
            let cycles = canonical_cycles(n, k).iter().map(|c| cycle_edges(c, n)).collect();
            (cycles, s)
        })
        .collect();
    let stride = order + 1;
    let norm = (n as f64).powf(order as f64 / 2.0);
    if let Some(int_table) = table.integral() {
        let walk = MomentWalk {
            factors: &factors,
            table: &int_table,
            stride,
        };
        if let Some(sum) = walk.total(n) {
            return Ok(Complex64::new(sum.re as f64, sum.im as f64) / norm);
        }
    }
    let walk = MomentWalk {
        factors: &factors,
        table: &table.values,
        stride,
    };
    Ok(walk.total(n).expect("floating-point accumulation cannot overflow") / norm)
}

/// The Gaussian limit of [`exact_trace_moment`]: Isserlis' sum over pairings
/// that match equal cycle lengths, with covariances
/// `E[(X_k/sqrt k)^2] = tau^k / k` and `E|X_k/sqrt k|^2 = 1/k`.
pub fn wick_limit_moment(query: &MomentQuery, tau: Complex64) -> Complex64 {
    fn cov(k: usize, a: Sign, b: Sign, tau: Complex64) -> Complex64 {
        let kf = k as f64;
        match (a, b) {
            (Sign::Plain, Sign::Plain) => tau.powu(k as u32) / kf,
            (Sign::Conj, Sign::Conj) => tau.conj().powu(k as u32) / kf,
            _ => Complex64::new(1.0 / kf, 0.0),
        }
    }
    fn pairings(ks: &[usize], signs: &[Sign], left: &mut Vec<usize>, tau: Complex64) -> Complex64 {
        let Some(i) = left.pop() else {
            return Complex64::new(1.0, 0.0);
        };
        let mut total = Complex64::new(0.0, 0.0);
        for pos in 0..left.len() {
            let j = left[pos];
            if ks[j] != ks[i] {
                continue;
            }
            left.remove(pos);
            total += cov(ks[i], signs[i], signs[j], tau) * pairings(ks, signs, left, tau);
            left.insert(pos, j);
        }
        left.push(i);
        total
    }
    if query.len() % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let mut left: Vec<usize> = (0..query.len()).collect();
    pairings(&query.ks, &query.signs, &mut left, tau)
}

/// `n (n-1) ... (n-m+1)`.
fn falling_factorial(n: usize, m: usize) -> f64 {
    (0..m).map(|i| n as f64 - i as f64).product::<f64>().max(0.0)
}

/// Leading-order mean of `r_k`: zero for odd k, and for even k the
/// `n (n-1) ... (n - k/2 + 1)` double cycles each contributing `tau^{k/2}`.
///
/// This ignores closed walks that revisit vertices in other patterns; see
/// [`exact_mean_rk`] for the full expectation.
pub fn mean_rk(k: usize, n: usize, tau: Complex64) -> Complex64 {
    if k % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    tau.powu((k / 2) as u32) * falling_factorial(n, k / 2)
}

/// [`mean_rk`] divided by `n^{k/2}`.
pub fn mean_rk_normalized(k: usize, n: usize, tau: Complex64) -> Complex64 {
    mean_rk(k, n, tau) / (n as f64).powf(k as f64 / 2.0)
}

/// Set partitions of `0..k` as restricted growth strings.
fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn grow(k: usize, word: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if word.len() == k {
            out.push(word.clone());
            return;
        }
        for b in 0..=blocks {
            word.push(b);
            grow(k, word, blocks.max(b + 1), out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    grow(k, &mut Vec::new(), 0, &mut out);
    out
}

/// Exact `E[r_k]` (unnormalized). Each coincidence pattern of the closed walk
/// `i_1 -> ... -> i_k -> i_1` with fewer than k distinct vertices contributes
/// its number of labelings times the product of edge moments.
pub fn exact_mean_rk(k: usize, n: usize, dist: &EntryDistribution) -> Result<Complex64> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("k and n must be at least 1".into()));
    }
    if k > 12 {
        return Err(Error::BudgetExceeded {
            what: "set partitions of closed-walk positions",
            required: k as f64,
            budget: 12.0,
        });
    }
    let table = MomentTable::from_distribution(dist, k)?;
    let mut total = Complex64::new(0.0, 0.0);
    for word in set_partitions(k) {
        let blocks = word.iter().max().map_or(0, |b| b + 1);
        if blocks == k || blocks > n {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (word[i], word[(i + 1) % k])).collect();
        edges.sort_unstable();
        let mut value = Complex64::new(falling_factorial(n, blocks), 0.0);
        for run in edges.chunk_by(|x, y| x == y) {
            value *= table.get(run.len(), 0).expect("table covers order k");
        }
        total += value;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_matrix, SeedSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn query_parsing() {
        let q = MomentQuery::parse("1,2,2", "p,c,p").unwrap();
        assert_eq!(q.ks(), &[1, 2, 2]);
        assert_eq!(q.signs(), &[Sign::Plain, Sign::Conj, Sign::Plain]);
        assert!(MomentQuery::parse("1,2", "p").is_err());
        assert!(MomentQuery::parse("0", "p").is_err());
        assert!(MomentQuery::parse("1", "x").is_err());
        assert_eq!(q.to_string(), "ks=1,2,2 signs=p,c,p");
    }

    #[test]
    fn battery_size() {
        // compositions of at most 2 into at most 1 part: (1), (2), two signs each
        assert_eq!(MomentQuery::battery(1, 2).len(), 4);
        let b = MomentQuery::battery(4, 6);
        assert!(b.iter().all(|q| q.len() <= 4 && q.total_order() <= 6));
        assert!(b.contains(&MomentQuery::parse("1,1,1,1", "p,c,p,c").unwrap()));
    }

    #[test]
    fn table_invariants() {
        for dist in crate::ensemble::builtin_distributions() {
            let order = (dist.max_moment_order() as usize).min(4);
            let t = MomentTable::from_distribution(&dist, order).unwrap();
            assert_eq!(t.get(0, 0), Some(c(1.0, 0.0)));
            assert!(t.get(1, 0).unwrap().norm() < 1e-12);
            assert!((t.get(1, 1).unwrap() - 1.0).norm() < 1e-12, "{}", dist.id());
            for p in 0..=order {
                for q in 0..=order - p {
                    assert!((t.get(p, q).unwrap() - t.get(q, p).unwrap().conj()).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn split_small_cases() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(3.0, 0.0)], vec![c(0.5, -1.0), c(-2.0, 0.0)]]).unwrap();
        let (t1, r1) = split_trace(&a, 1).unwrap();
        assert_eq!((t1, r1), (a.trace(), c(0.0, 0.0)));
        let (t2, r2) = split_trace(&a, 2).unwrap();
        assert!((t2 - a[(0, 1)] * a[(1, 0)]).norm() < 1e-14);
        assert!((r2 - (a[(0, 0)] * a[(0, 0)] + a[(1, 1)] * a[(1, 1)])).norm() < 1e-14);
    }

    #[test]
    fn closed_forms_match_enumeration() {
        let dist = EntryDistribution::complex_gaussian();
        for n in 1..=6 {
            let a = sample_matrix(&dist, n, SeedSpec::new(5, n as u64)).unwrap();
            let traces = crate::densela::traces_of_powers(&a, 5).unwrap();
            for k in 1..=5 {
                let (t, r) = split_trace(&a, k).unwrap();
                let (te, re) = split_trace_enumerated(&a, k).unwrap();
                assert!((t - te).norm() < 1e-9, "n={n} k={k}");
                assert!((r - re).norm() < 1e-9, "n={n} k={k}");
                assert!((t * k as f64 + r - traces[k - 1]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn split_budget() {
        assert!(matches!(
            split_trace(&ComplexMatrix::identity(100), 5),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(split_trace(&ComplexMatrix::identity(100), 4).is_ok());
    }

    #[test]
    fn exact_moment_examples() {
        for dist in [EntryDistribution::rademacher(), EntryDistribution::complex_gaussian()] {
            for n in 1..=4 {
                let q = |ks: &str, s: &str| MomentQuery::parse(ks, s).unwrap();
                assert_eq!(exact_trace_moment(&q("1", "p"), n, &dist).unwrap(), c(0.0, 0.0));
                let v = exact_trace_moment(&q("1,1", "p,c"), n, &dist).unwrap();
                assert!((v - 1.0).norm() < 1e-14);
                let v = exact_trace_moment(&q("1,1", "p,p"), n, &dist).unwrap();
                assert!((v - dist.tau()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rademacher_fourth_power_of_trace() {
        // E(Tr A)^4 = 3n^2 - 2n for independent signs on the diagonal
        let q = MomentQuery::parse("1,1,1,1", "p,p,p,p").unwrap();
        for n in 1..=5 {
            let v = exact_trace_moment(&q, n, &EntryDistribution::rademacher()).unwrap();
            let nf = n as f64;
            assert!((v.re - (3.0 - 2.0 / nf)).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_moment_refuses() {
        let q = MomentQuery::parse("4,4,4", "p,c,p").unwrap();
        assert!(matches!(
            exact_trace_moment(&q, 10, &EntryDistribution::rademacher()),
            Err(Error::BudgetExceeded { .. })
        ));
        let heavy = EntryDistribution::heavy("h", 2.5).unwrap();
        let q = MomentQuery::parse("1,1,1,1", "p,c,p,c").unwrap();
        assert!(matches!(exact_trace_moment(&q, 2, &heavy), Err(Error::MomentUnavailable { .. })));
    }

    #[test]
    fn wick_examples() {
        let q = |ks: &str, s: &str| MomentQuery::parse(ks, s).unwrap();
        let tau = c(0.3, -0.4);
        assert_eq!(wick_limit_moment(&q("1,2,3", "p,p,c"), tau), c(0.0, 0.0));
        assert_eq!(wick_limit_moment(&q("1,1", "p,c"), tau), c(1.0, 0.0));
        assert_eq!(wick_limit_moment(&q("2,2", "p,c"), tau), c(0.5, 0.0));
        assert_eq!(wick_limit_moment(&q("1,2", "p,c"), tau), c(0.0, 0.0));
        // {12}{34} + {13}{24} + {14}{23} = 1 + |tau|^2 + 1
        let v = wick_limit_moment(&q("1,1,1,1", "p,c,p,c"), tau);
        assert!((v - (2.0 + tau.norm_sqr())).norm() < 1e-15);
        let v = wick_limit_moment(&q("1,1,1,1", "p,p,p,p"), c(1.0, 0.0));
        assert!((v - 3.0).norm() < 1e-15);
    }

    #[test]
    fn mean_rk_examples() {
        let tau = c(0.2, 0.7);
        assert_eq!(mean_rk(3, 10, tau), c(0.0, 0.0));
        assert!((mean_rk(2, 7, tau) - tau * 7.0).norm() < 1e-14);
        assert!((mean_rk_normalized(2, 7, tau) - tau).norm() < 1e-14);
        assert!((mean_rk(4, 3, tau) - tau * tau * 6.0).norm() < 1e-14);
    }

    #[test]
    fn exact_mean_rk_small_cases() {
        let rad = EntryDistribution::rademacher();
        assert_eq!(exact_mean_rk(1, 5, &rad).unwrap(), c(0.0, 0.0));
        assert!((exact_mean_rk(2, 5, &rad).unwrap() - 5.0).norm() < 1e-12);
        // double cycles 6, plus the four-loop walks i,i,i,i (3) = 9
        assert!((exact_mean_rk(4, 3, &rad).unwrap() - 9.0).norm() < 1e-12);
        assert_eq!(exact_mean_rk(3, 4, &rad).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (k, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(set_partitions(k).len(), b);
        }
    }
}
