use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{weak_majorize, MajorizationVerdict, Order, Positivity, WeightVector};
use crate::analytic::compensated_sum;
use crate::linalg::{binomial, principal_minor, Combinations};
use crate::{Error, Result, SpdMatrix};

/// Scalar checks pass with slack `1e-10 · max(1, |lhs|, |rhs|)`.
pub const SCALAR_TOLERANCE: f64 = 1e-10;
/// Largest compound-matrix order built by default.
pub const COMPOUND_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `lhs <= rhs`
    LessEq,
    /// `lhs >= rhs`
    GreaterEq,
}

/// One scalar inequality evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub direction: Direction,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    fn new(name: &str, lhs: f64, rhs: f64, direction: Direction) -> Self {
        let tolerance = SCALAR_TOLERANCE * 1f64.max(lhs.abs()).max(rhs.abs());
        let pass = match direction {
            Direction::LessEq => lhs <= rhs + tolerance,
            Direction::GreaterEq => lhs >= rhs - tolerance,
        };
        CheckReport { name: name.into(), lhs, rhs, direction, tolerance, pass }
    }

    /// Margin by which the inequality holds; negative when violated.
    pub fn slack(&self) -> f64 {
        match self.direction {
            Direction::LessEq => self.rhs - self.lhs,
            Direction::GreaterEq => self.lhs - self.rhs,
        }
    }
}

fn weighted_power_sums(
    a: &SpdMatrix,
    weights: &WeightVector,
    p: f64,
) -> Result<(f64, f64)> {
    if weights.len() != a.order() {
        return Err(Error::Parameter(alloc::format!(
            "{} weights for a matrix of order {}",
            weights.len(),
            a.order()
        )));
    }
    let eig = a.check_positive_definite()?;
    let w = weights.values();
    let lhs = compensated_sum(w.iter().zip(&eig).map(|(wi, l)| (wi * l).powf(p)));
    let rhs = compensated_sum(w.iter().zip(a.diag()).map(|(wi, d)| (wi * d).powf(p)));
    Ok((lhs, rhs))
}

/// `Σ (a_i λ_i(A))^p <= Σ (a_i A(i,i))^p` for `0 <= p <= 1` and descending
/// nonnegative `a`; eigenvalues ascending, diagonal in natural order.
pub fn lemma_matrix_part1(a: &SpdMatrix, weights: &WeightVector, p: f64) -> Result<CheckReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(alloc::format!("part 1 needs 0 <= p <= 1, got {p}")));
    }
    if weights.order() != Order::Descending {
        return Err(Error::Parameter("part 1 needs descending weights".into()));
    }
    let (lhs, rhs) = weighted_power_sums(a, weights, p)?;
    Ok(CheckReport::new("lemma-matrix-1", lhs, rhs, Direction::LessEq))
}

/// `Σ (a_i λ_i(A))^p >= Σ (a_i A(i,i))^p` for `p >= 1` or `p <= 0` and
/// ascending positive `a`.
pub fn lemma_matrix_part2(a: &SpdMatrix, weights: &WeightVector, p: f64) -> Result<CheckReport> {
    if !(p >= 1.0 || p <= 0.0) {
        return Err(Error::Parameter(alloc::format!("part 2 needs p >= 1 or p <= 0, got {p}")));
    }
    if weights.order() != Order::Ascending || weights.positivity() != Positivity::StrictlyPositive {
        return Err(Error::Parameter("part 2 needs ascending, strictly positive weights".into()));
    }
    let (lhs, rhs) = weighted_power_sums(a, weights, p)?;
    Ok(CheckReport::new("lemma-matrix-2", lhs, rhs, Direction::GreaterEq))
}

fn check_subset_size(m: usize, k: usize, cap: u64) -> Result<u64> {
    if k == 0 || k > m {
        return Err(Error::Parameter(alloc::format!("k must be in 1..={m}, got {k}")));
    }
    match binomial(m, k) {
        Some(c) if c <= cap => Ok(c),
        _ => Err(Error::Size(alloc::format!("C({m}, {k}) exceeds the cap of {cap}"))),
    }
}

/// Sum over all `k`-subsets of `(Π values)^p`.
pub(crate) fn subset_power_sum(values: &[f64], k: usize, p: f64) -> Result<f64> {
    check_subset_size(values.len(), k, COMPOUND_CAP)?;
    Ok(compensated_sum(
        Combinations::new(values.len(), k).map(|s| s.iter().map(|&i| values[i]).product::<f64>().powf(p)),
    ))
}

/// `Σ_{|I|=k} (Π_{i∈I} λ_i(A))^p >= Σ_{|I|=k} (Π_{i∈I} A(i,i))^p` for `p <= 0`.
pub fn lemma_matrix_part3(a: &SpdMatrix, p: f64, k: usize) -> Result<CheckReport> {
    if !(p <= 0.0) {
        return Err(Error::Parameter(alloc::format!("part 3 needs p <= 0, got {p}")));
    }
    check_subset_size(a.order(), k, COMPOUND_CAP)?;
    let eig = a.check_positive_definite()?;
    let lhs = subset_power_sum(&eig, k, p)?;
    let rhs = subset_power_sum(&a.diag(), k, p)?;
    Ok(CheckReport::new("lemma-matrix-3", lhs, rhs, Direction::GreaterEq))
}

/// `k`-th compound (exterior power) of `A`: all `k x k` minors, rows and
/// columns indexed by `k`-subsets in lexicographic order.
pub fn compound_matrix(a: &SpdMatrix, k: usize) -> Result<SpdMatrix> {
    compound_matrix_capped(a, k, COMPOUND_CAP)
}

pub fn compound_matrix_capped(a: &SpdMatrix, k: usize, cap: u64) -> Result<SpdMatrix> {
    let n = check_subset_size(a.order(), k, cap)? as usize;
    let subsets: Vec<Vec<usize>> = Combinations::new(a.order(), k).collect();
    let mut data = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let minor = principal_minor(a.order(), a.as_slice(), &subsets[i], &subsets[j]);
            data[i * n + j] = minor;
            data[j * n + i] = minor;
        }
    }
    SpdMatrix::new(n, data)
}

/// Hadamard: `det A[I,I] <= Π_{i∈I} A(i,i)`.
pub fn hadamard_check(a: &SpdMatrix, subset: &[usize]) -> Result<CheckReport> {
    if subset.is_empty() {
        return Err(Error::Parameter("subset is empty".into()));
    }
    let mut seen = alloc::vec![false; a.order()];
    for &i in subset {
        if i >= a.order() {
            return Err(Error::index("matrix row", i, a.order()));
        }
        if core::mem::replace(&mut seen[i], true) {
            return Err(Error::Parameter(alloc::format!("index {i} repeated in subset")));
        }
    }
    a.check_positive_definite()?;
    let lhs = principal_minor(a.order(), a.as_slice(), subset, subset);
    let rhs = subset.iter().map(|&i| a.get(i, i)).product();
    Ok(CheckReport::new("hadamard", lhs, rhs, Direction::LessEq))
}

/// Schur: the diagonal of a symmetric matrix is majorized by its eigenvalues.
pub fn schur_check(a: &SpdMatrix) -> Result<MajorizationVerdict> {
    weak_majorize(&a.diag(), &a.eigenvalues())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungReport {
    pub check: CheckReport,
    /// `p` with `1/p = Σ 1/p_i`
    pub p_effective: f64,
    pub log_lhs: f64,
    pub log_rhs: f64,
}

/// `Σ x_i^{p_i} >= (1/p) (Π p_i^{1/p_i})^p (Π x_i)^p` with `1/p = Σ 1/p_i`,
/// both sides formed in log space.
pub fn young_product_bound(x: &[f64], exponents: &[f64]) -> Result<YoungReport> {
    if x.is_empty() || x.len() != exponents.len() {
        return Err(Error::Parameter(alloc::format!(
            "need equally many values and exponents, got {} and {}",
            x.len(),
            exponents.len()
        )));
    }
    if x.iter().chain(exponents).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Parameter("values and exponents must be positive and finite".into()));
    }
    let p = 1.0 / compensated_sum(exponents.iter().map(|pi| 1.0 / pi));
    let terms: Vec<f64> = x.iter().zip(exponents).map(|(xi, pi)| pi * xi.ln()).collect();
    let top = terms.iter().fold(f64::NEG_INFINITY, |m, &t| m.max(t));
    let log_lhs = top + compensated_sum(terms.iter().map(|t| (t - top).exp())).ln();
    let log_rhs = -p.ln()
        + p * compensated_sum(exponents.iter().map(|pi| pi.ln() / pi))
        + p * compensated_sum(x.iter().map(|xi| xi.ln()));
    let (lhs, rhs) = (log_lhs.exp(), log_rhs.exp());
    let mut check = CheckReport::new("young", lhs, rhs, Direction::GreaterEq);
    if !(lhs.is_finite() && rhs.is_finite()) {
        // beyond f64 range both sides exceed 1, so the scaled tolerance is
        // relative and can be applied to the logarithms
        check.pass = log_lhs >= log_rhs - SCALAR_TOLERANCE;
    }
    Ok(YoungReport { check, p_effective: p, log_lhs, log_rhs })
}
