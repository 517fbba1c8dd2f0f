//! Majorization and the matrix/scalar inequalities behind the trace bounds:
//! Schur's theorem, Hadamard's inequality, compound matrices, the weighted
//! eigenvalue-versus-diagonal lemmas, and a product form of Young's inequality.
//!
//! Eigenvalues here come from the crate's own Jacobi solver, never from the
//! FEM eigensolver.

pub mod fuzz;
mod matrix;

pub use matrix::{
    compound_matrix, compound_matrix_capped, hadamard_check, lemma_matrix_part1, lemma_matrix_part2,
    lemma_matrix_part3, schur_check, young_product_bound, CheckReport, Direction, YoungReport,
    COMPOUND_CAP, SCALAR_TOLERANCE,
};
pub(crate) use matrix::subset_power_sum;

use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Descending,
    Ascending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Positivity {
    NonNegative,
    StrictlyPositive,
}

/// Weights whose ordering and sign are checked exactly at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightRepr", into = "WeightRepr")]
pub struct WeightVector {
    values: Vec<f64>,
    order: Order,
    positivity: Positivity,
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    values: Vec<f64>,
    order: Order,
    positivity: Positivity,
}

impl TryFrom<WeightRepr> for WeightVector {
    type Error = Error;

    fn try_from(r: WeightRepr) -> Result<Self> {
        WeightVector::new(r.values, r.order, r.positivity)
    }
}

impl From<WeightVector> for WeightRepr {
    fn from(w: WeightVector) -> Self {
        WeightRepr {
            values: w.values,
            order: w.order,
            positivity: w.positivity,
        }
    }
}

impl WeightVector {
    pub fn new(values: Vec<f64>, order: Order, positivity: Positivity) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("weight vector is empty".into()));
        }
        for (i, &v) in values.iter().enumerate() {
            let ok = v.is_finite()
                && match positivity {
                    Positivity::NonNegative => v >= 0.0,
                    Positivity::StrictlyPositive => v > 0.0,
                };
            if !ok {
                return Err(Error::Parameter(alloc::format!(
                    "weight {} = {v} violates {positivity:?}",
                    i + 1
                )));
            }
        }
        for (i, w) in values.windows(2).enumerate() {
            let ok = match order {
                Order::Descending => w[0] >= w[1],
                Order::Ascending => w[0] <= w[1],
            };
            if !ok {
                return Err(Error::Parameter(alloc::format!(
                    "weights {} and {} ({} then {}) are not {order:?}",
                    i + 1,
                    i + 2,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(WeightVector { values, order, positivity })
    }

    /// `m` ones; constant weights satisfy either ordering.
    pub fn ones(m: usize, order: Order) -> Result<Self> {
        Self::new(alloc::vec![1.0; m], order, Positivity::StrictlyPositive)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn positivity(&self) -> Positivity {
        self.positivity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `x ≺ y`: weakly majorized with equal totals.
    Majorized,
    /// `x ≺_w y` without equal totals.
    WeaklyMajorized,
    Neither,
}

impl Relation {
    /// True for both `≺` and `≺_w`.
    pub fn is_weak(self) -> bool {
        self != Relation::Neither
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub relation: Relation,
    /// Prefix sums of `x` sorted descending.
    pub partial_sums_x: Vec<f64>,
    pub partial_sums_y: Vec<f64>,
    /// 1-based length of the first failing prefix.
    pub first_violation_index: Option<usize>,
    pub tolerance: f64,
}

/// Relative tolerance for prefix-sum comparisons.
pub const MAJORIZATION_TOLERANCE: f64 = 1e-12;

fn descending_prefix_sums(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    s.iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

/// Compares descending prefix sums of `x` and `y`.
pub fn weak_majorize(x: &[f64], y: &[f64]) -> Result<MajorizationVerdict> {
    if x.len() != y.len() {
        return Err(Error::Parameter(alloc::format!(
            "majorization needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Parameter("majorization inputs must be finite".into()));
    }
    let sx = descending_prefix_sums(x);
    let sy = descending_prefix_sums(y);
    let scale = x.iter().chain(y).fold(1.0f64, |m, v| m.max(v.abs())) * x.len().max(1) as f64;
    let tol = MAJORIZATION_TOLERANCE * scale;
    let first_violation_index = sx.iter().zip(&sy).position(|(a, b)| *a > b + tol).map(|i| i + 1);
    let relation = match first_violation_index {
        Some(_) => Relation::Neither,
        None => match (sx.last(), sy.last()) {
            (Some(a), Some(b)) if (a - b).abs() > tol => Relation::WeaklyMajorized,
            _ => Relation::Majorized,
        },
    };
    Ok(MajorizationVerdict {
        relation,
        partial_sums_x: sx,
        partial_sums_y: sy,
        first_violation_index,
        tolerance: tol,
    })
}

/// Convex functions for the majorization principles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "f", rename_all = "kebab-case")]
pub enum ConvexFn {
    Square,
    Abs,
    Exp,
    /// `max(t - c, 0)`
    Hinge { c: f64 },
    /// `t^p` on `t >= 0`, `p >= 1`
    Power { p: f64 },
    /// `-t^p` on `t >= 0`, `0 <= p <= 1`
    NegPower { p: f64 },
}

impl ConvexFn {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ConvexFn::Hinge { c } => c.is_finite(),
            ConvexFn::Power { p } => p.is_finite() && p >= 1.0,
            ConvexFn::NegPower { p } => (0.0..=1.0).contains(&p),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(alloc::format!("{self:?} is not convex")))
        }
    }

    fn domain_nonnegative(&self) -> bool {
        matches!(self, ConvexFn::Power { .. } | ConvexFn::NegPower { .. })
    }

    pub fn apply(&self, t: f64) -> f64 {
        match *self {
            ConvexFn::Square => t * t,
            ConvexFn::Abs => t.abs(),
            ConvexFn::Exp => t.exp(),
            ConvexFn::Hinge { c } => (t - c).max(0.0),
            ConvexFn::Power { p } => t.powf(p),
            ConvexFn::NegPower { p } => -t.powf(p),
        }
    }

    /// Whether `f` is nondecreasing on an interval containing `values`.
    pub fn is_increasing_on(&self, values: &[f64]) -> bool {
        let nonneg = values.iter().all(|&v| v >= 0.0);
        match *self {
            ConvexFn::Exp | ConvexFn::Hinge { .. } => true,
            ConvexFn::Square | ConvexFn::Abs | ConvexFn::Power { .. } => nonneg,
            ConvexFn::NegPower { p } => p == 0.0,
        }
    }
}

/// Applies `f` to both sides of `x ≺_w y` (for increasing `f`) or `x ≺ y`
/// (any convex `f`) and returns the verdict on `(f(x), f(y))`, which the
/// majorization principles say is at least `≺_w`.
pub fn majorization_principle_check(x: &[f64], y: &[f64], f: ConvexFn) -> Result<MajorizationVerdict> {
    f.validate()?;
    if f.domain_nonnegative() && x.iter().chain(y).any(|&v| v < 0.0) {
        return Err(Error::Parameter(alloc::format!("{f:?} is only defined for t >= 0")));
    }
    let before = weak_majorize(x, y)?;
    match before.relation {
        Relation::Majorized => {}
        Relation::WeaklyMajorized => {
            let mut all = x.to_vec();
            all.extend_from_slice(y);
            if !f.is_increasing_on(&all) {
                return Err(Error::Precondition(alloc::format!(
                    "x is only weakly majorized by y and {f:?} is not increasing on the data"
                )));
            }
        }
        Relation::Neither => {
            let i = before.first_violation_index.unwrap_or(0);
            return Err(Error::Precondition(alloc::format!(
                "x is not weakly majorized by y: prefix {i} sums to {} > {}",
                before.partial_sums_x[i - 1],
                before.partial_sums_y[i - 1]
            )));
        }
    }
    let fx: Vec<f64> = x.iter().map(|&t| f.apply(t)).collect();
    let fy: Vec<f64> = y.iter().map(|&t| f.apply(t)).collect();
    weak_majorize(&fx, &fy)
}

#[cfg(test)]
mod tests;
