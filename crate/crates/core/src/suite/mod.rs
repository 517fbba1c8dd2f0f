//! Evaluators for the trace and inverse-trace inequalities on Steklov and
//! boundary-Laplacian spectra. Every evaluator reads its eigenvalues through
//! 1-based indices, forms both sides exactly as the inequality is stated and
//! returns an [`InequalityReport`].
//!
//! Surfaces only: the `(n-2)`-form spectrum of a surface is its function
//! spectrum, read with offset `b0`.

mod eval;
mod run;

pub use eval::*;
pub use run::{default_grid, run_all, GridEntry, SpectraBundle, Summary};

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::ineq::{Direction, Order, Positivity, WeightVector};
use crate::spectrum::ANALYTIC_TOLERANCE;
use crate::{DomainTopology, Error, Result, Spectrum, SpectrumKind, SpectrumSource};

/// Parameters echoed into a report; unset fields are omitted when serialized.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<DomainTopology>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reading: Option<String>,
}

/// One evaluated inequality.
///
/// `slack` is oriented so that it is nonnegative exactly when the inequality
/// holds: `rhs - lhs` for `lhs <= rhs`, `lhs - rhs` for `lhs >= rhs`.
/// `relative_slack` divides it by `max(|lhs|, |rhs|)`. The check passes when
/// the smaller side exceeds the larger by at most `tolerance` relative plus
/// `tolerance` absolute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub params: ReportParams,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Direction,
    pub slack: f64,
    pub relative_slack: f64,
    pub pass: bool,
    pub tolerance: f64,
    pub sharp: bool,
    pub sharpness_tolerance: f64,
    /// Probes of open questions: `pass` means "consistent", not "verified".
    pub informational: bool,
    pub inputs: Vec<SpectrumSource>,
}

impl InequalityReport {
    pub(crate) fn new(
        name: &str,
        params: ReportParams,
        (lhs, rhs): (f64, f64),
        relation: Direction,
        inputs: &[&Spectrum],
    ) -> Self {
        let (tolerance, sharpness_tolerance) = tolerances(inputs);
        let mut sources: Vec<SpectrumSource> = Vec::new();
        for s in inputs {
            if !sources.contains(s.source()) {
                sources.push(s.source().clone());
            }
        }
        let mut report = InequalityReport {
            name: name.into(),
            params,
            lhs,
            rhs,
            relation,
            slack: 0.0,
            relative_slack: 0.0,
            pass: false,
            tolerance,
            sharp: false,
            sharpness_tolerance,
            informational: false,
            inputs: sources,
        };
        report.judge();
        report
    }

    /// Widens the pass tolerance (sharpness is judged separately).
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.judge();
        self
    }

    fn judge(&mut self) {
        let (small, big) = match self.relation {
            Direction::LessEq => (self.lhs, self.rhs),
            Direction::GreaterEq => (self.rhs, self.lhs),
        };
        self.slack = big - small;
        let scale = self.lhs.abs().max(self.rhs.abs());
        self.relative_slack = if scale > 0.0 { self.slack / scale } else { 0.0 };
        self.pass = small <= big * (1.0 + self.tolerance) + self.tolerance;
        self.sharp = self.pass && self.relative_slack.abs() <= self.sharpness_tolerance;
    }
}

/// Pass tolerance is the loosest tolerance among the inputs; sharpness is
/// judged at `1e-9` for closed-form inputs and at three times the pass
/// tolerance otherwise.
fn tolerances(inputs: &[&Spectrum]) -> (f64, f64) {
    let tol = inputs.iter().map(|s| s.tolerance()).fold(0.0, f64::max);
    if inputs.iter().all(|s| s.is_analytic()) {
        (tol, ANALYTIC_TOLERANCE)
    } else {
        (tol, 3.0 * tol)
    }
}

/// Hypotheses of the weighted trace theorems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremParams {
    pub r: usize,
    pub s: usize,
    pub m: usize,
    pub p: f64,
    pub q: f64,
    /// Descending, nonnegative.
    pub a: WeightVector,
    /// Descending, strictly positive.
    pub c: WeightVector,
    /// Subset size for the inverse-trace theorem, `1 <= k <= m`.
    pub k: usize,
    pub mu: f64,
}

impl TheoremParams {
    /// Unit weights, `k = 1`, `μ = 1`.
    pub fn new(r: usize, s: usize, m: usize, p: f64, q: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("m must be positive".into()));
        }
        Ok(TheoremParams {
            r,
            s,
            m,
            p,
            q,
            a: WeightVector::ones(m, Order::Descending)?,
            c: WeightVector::ones(m, Order::Descending)?,
            k: 1,
            mu: 1.0,
        })
    }

    pub fn with_weights(mut self, a: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        self.a = WeightVector::new(a, Order::Descending, Positivity::NonNegative)?;
        self.c = WeightVector::new(c, Order::Descending, Positivity::StrictlyPositive)?;
        Ok(self)
    }

    pub fn with_k_mu(mut self, k: usize, mu: f64) -> Self {
        self.k = k;
        self.mu = mu;
        self
    }

    /// `q*` with `1/q* + 1/q = 1`.
    pub fn q_star(&self) -> f64 {
        self.q / (self.q - 1.0)
    }

    fn check_indices(&self) -> Result<()> {
        if self.r == 0 || self.s == 0 || self.m == 0 {
            return Err(Error::Parameter(alloc::format!(
                "r, s, m must be positive, got ({}, {}, {})",
                self.r,
                self.s,
                self.m
            )));
        }
        Ok(())
    }

    /// `q >= p >= 1`, `q > 1`, weights of length `m` with the required order.
    pub fn validate_thm1(&self) -> Result<()> {
        self.check_indices()?;
        if !(self.p >= 1.0 && self.q >= self.p && self.q > 1.0 && self.q.is_finite()) {
            return Err(Error::Parameter(alloc::format!(
                "need q >= p >= 1 and q > 1, got p = {}, q = {}",
                self.p,
                self.q
            )));
        }
        if self.a.len() != self.m || self.c.len() != self.m {
            return Err(Error::Parameter(alloc::format!(
                "weights a, c must have length m = {}, got {} and {}",
                self.m,
                self.a.len(),
                self.c.len()
            )));
        }
        if self.a.order() != Order::Descending {
            return Err(Error::Parameter("weights a must be descending".into()));
        }
        if self.c.order() != Order::Descending || self.c.positivity() != Positivity::StrictlyPositive {
            return Err(Error::Parameter("weights c must be descending and strictly positive".into()));
        }
        Ok(())
    }

    /// `p > 0`, `q >= 1`, `μ > 0`, `1 <= k <= m`.
    pub fn validate_thm2(&self) -> Result<()> {
        self.check_indices()?;
        if !(self.p > 0.0 && self.p.is_finite() && self.q >= 1.0 && self.q.is_finite()) {
            return Err(Error::Parameter(alloc::format!(
                "need p > 0 and q >= 1, got p = {}, q = {}",
                self.p,
                self.q
            )));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::Parameter(alloc::format!("need μ > 0, got {}", self.mu)));
        }
        if self.k == 0 || self.k > self.m {
            return Err(Error::Parameter(alloc::format!("need 1 <= k <= m = {}, got {}", self.m, self.k)));
        }
        Ok(())
    }
}

/// Index offsets: `σ_{r+i}`, `σ_{b0+s+i-1}` and `λ_{b1+r+s+i-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexMap {
    pub b0: usize,
    pub b1: usize,
    pub r: usize,
    pub s: usize,
}

impl IndexMap {
    pub fn new(topo: &DomainTopology, r: usize, s: usize) -> Self {
        IndexMap { b0: topo.b0, b1: topo.b1, r, s }
    }

    pub fn sigma0(&self, sigma: &Spectrum, i: usize) -> Result<f64> {
        sigma.get(self.r + i)
    }

    pub fn sigma_n2(&self, sigma: &Spectrum, i: usize) -> Result<f64> {
        sigma.get(self.b0 + self.s + i - 1)
    }

    pub fn lambda(&self, lambda: &Spectrum, i: usize) -> Result<f64> {
        lambda.get(self.b1 + self.r + self.s + i - 1)
    }
}

/// Refuses anything but surfaces.
fn check_surface(topo: &DomainTopology) -> Result<()> {
    if topo.dimension != 2 {
        return Err(Error::Configuration(alloc::format!(
            "only surfaces are supported, got dimension {}",
            topo.dimension
        )));
    }
    topo.validate()
}

fn check_kind(s: &Spectrum, kind: SpectrumKind, role: &str) -> Result<()> {
    if s.kind() != kind {
        return Err(Error::Configuration(alloc::format!(
            "{role} must be a {kind:?} spectrum, got {:?}",
            s.kind()
        )));
    }
    Ok(())
}

fn check_length(length: f64) -> Result<()> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Parameter(alloc::format!("boundary length must be positive, got {length}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
