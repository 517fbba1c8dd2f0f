//! Closed-form reference spectra: Steklov spectra of disks and annuli, the
//! Laplacian spectrum of a circle, and the partial zeta sums that appear on
//! the right-hand sides of the trace inequalities.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::mesh::DomainTopology;
use crate::spectrum::ANALYTIC_TOLERANCE;
use crate::{Error, Result, Spectrum, SpectrumKind, SpectrumSource};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain", rename_all = "kebab-case")]
pub enum AnalyticDomain {
    Disk { radius: f64 },
    Circle { length: f64 },
    Annulus { r_inner: f64, r_outer: f64 },
}

impl AnalyticDomain {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            AnalyticDomain::Disk { radius } => radius.is_finite() && radius > 0.0,
            AnalyticDomain::Circle { length } => length.is_finite() && length > 0.0,
            AnalyticDomain::Annulus { r_inner, r_outer } => {
                r_inner.is_finite() && r_outer.is_finite() && 0.0 < r_inner && r_inner < r_outer
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(alloc::format!("invalid analytic domain {self:?}")))
        }
    }

    pub fn boundary_components(&self) -> usize {
        match self {
            AnalyticDomain::Annulus { .. } => 2,
            _ => 1,
        }
    }

    /// Topology of the planar domain (a circle is read as the boundary of a disk).
    pub fn topology(&self) -> DomainTopology {
        match self {
            AnalyticDomain::Annulus { .. } => DomainTopology::new(0, 2).unwrap(),
            _ => DomainTopology::simply_connected(),
        }
    }

    /// Total boundary length.
    pub fn boundary_length(&self) -> f64 {
        match *self {
            AnalyticDomain::Disk { radius } => 2.0 * PI * radius,
            AnalyticDomain::Circle { length } => length,
            AnalyticDomain::Annulus { r_inner, r_outer } => 2.0 * PI * (r_inner + r_outer),
        }
    }

    pub fn steklov(&self, count: usize) -> Result<Spectrum> {
        match *self {
            AnalyticDomain::Disk { radius } => steklov_disk(radius, count),
            AnalyticDomain::Annulus { r_inner, r_outer } => steklov_annulus(r_inner, r_outer, count),
            AnalyticDomain::Circle { .. } => Err(Error::Unsupported(
                "a circle has no Steklov spectrum; use a disk".into(),
            )),
        }
    }

    /// Laplacian spectrum of the boundary curve(s).
    pub fn boundary_laplacian(&self, count: usize) -> Result<Spectrum> {
        self.validate()?;
        check_count(count)?;
        let values = match *self {
            AnalyticDomain::Disk { radius } => circle_values(2.0 * PI * radius, count),
            AnalyticDomain::Circle { length } => circle_values(length, count),
            AnalyticDomain::Annulus { r_inner, r_outer } => {
                let mut v = circle_values(2.0 * PI * r_inner, count);
                v.extend(circle_values(2.0 * PI * r_outer, count));
                v.sort_by(f64::total_cmp);
                v.truncate(count);
                v
            }
        };
        analytic_spectrum(values, SpectrumKind::BoundaryLaplacian, *self)
    }
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::Parameter("eigenvalue count must be at least 1".into()));
    }
    Ok(())
}

fn analytic_spectrum(values: Vec<f64>, kind: SpectrumKind, domain: AnalyticDomain) -> Result<Spectrum> {
    Spectrum::new(values, kind, SpectrumSource::Analytic { domain }, ANALYTIC_TOLERANCE)
}

/// Steklov spectrum of the disk of radius `radius`: `(0, 1, 1, 2, 2, ...)/radius`.
pub fn steklov_disk(radius: f64, count: usize) -> Result<Spectrum> {
    let domain = AnalyticDomain::Disk { radius };
    domain.validate()?;
    check_count(count)?;
    let values = (0..count).map(|i| i.div_ceil(2) as f64 / radius).collect();
    analytic_spectrum(values, SpectrumKind::Steklov, domain)
}

fn circle_values(length: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let w = 2.0 * PI * i.div_ceil(2) as f64 / length;
            w * w
        })
        .collect()
}

/// Laplacian spectrum of a circle of length `length`:
/// `λ_1 = 0`, `λ_{2i} = λ_{2i+1} = (2iπ/L)^2`.
pub fn laplacian_circle(length: f64, count: usize) -> Result<Spectrum> {
    let domain = AnalyticDomain::Circle { length };
    domain.validate()?;
    check_count(count)?;
    analytic_spectrum(circle_values(length, count), SpectrumKind::BoundaryLaplacian, domain)
}

/// The two Steklov eigenvalues of Fourier mode `k` on the annulus
/// `r_inner < r < r_outer`, ascending. Mode 0 gives `0` and
/// `(1/a + 1/b) / ln(b/a)`; each mode `k >= 1` has both roots doubled by the
/// cos/sin pair.
pub fn annulus_mode(r_inner: f64, r_outer: f64, k: usize) -> (f64, f64) {
    let (a, b) = (r_inner, r_outer);
    if k == 0 {
        return (0.0, (1.0 / a + 1.0 / b) / (b / a).ln());
    }
    // basis (r/b)^k and (a/r)^k keeps every coefficient O(1):
    // (1-t) σ² - (1+t) k (1/a + 1/b) σ + (1-t) k²/(ab) = 0, t = (a/b)^{2k}
    let k = k as f64;
    let t = (a / b).powf(2.0 * k);
    let qa = 1.0 - t;
    let qb = (1.0 + t) * k * (1.0 / a + 1.0 / b);
    let qc = (1.0 - t) * k * k / (a * b);
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
    let big = (qb + disc) / (2.0 * qa);
    let small = 2.0 * qc / (qb + disc);
    (small, big)
}

/// Steklov spectrum of the annulus, merged across Fourier modes with
/// multiplicities listed explicitly.
pub fn steklov_annulus(r_inner: f64, r_outer: f64, count: usize) -> Result<Spectrum> {
    let domain = AnalyticDomain::Annulus { r_inner, r_outer };
    domain.validate()?;
    check_count(count)?;
    let mut values = Vec::with_capacity(count + 4);
    let mut k = 0usize;
    loop {
        let (lo, hi) = annulus_mode(r_inner, r_outer, k);
        // mode roots increase with k, so once the smaller root of mode k
        // exceeds the current count-th value nothing later can enter
        if values.len() >= count {
            values.sort_by(f64::total_cmp);
            if lo > values[count - 1] {
                break;
            }
        }
        let mult = if k == 0 { 1 } else { 2 };
        for _ in 0..mult {
            values.push(lo);
            values.push(hi);
        }
        k += 1;
    }
    values.sort_by(f64::total_cmp);
    values.truncate(count);
    analytic_spectrum(values, SpectrumKind::Steklov, domain)
}

/// Number of terms in a partial zeta sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaTerms {
    Finite(usize),
    Infinite,
}

/// `Σ_{i=1}^{n} i^{-exponent}`, accumulated smallest term first with
/// Neumaier compensation. The infinite sum is only available for exponent 2.
pub fn partial_zeta(terms: ZetaTerms, exponent: f64) -> Result<f64> {
    match terms {
        ZetaTerms::Infinite if exponent == 2.0 => Ok(PI * PI / 6.0),
        ZetaTerms::Infinite => Err(Error::Unsupported(alloc::format!(
            "infinite zeta sum is only provided for exponent 2, got {exponent}"
        ))),
        ZetaTerms::Finite(0) => Err(Error::Parameter("partial zeta needs n >= 1".into())),
        ZetaTerms::Finite(n) => Ok(compensated_sum((1..=n).rev().map(|i| (i as f64).powf(-exponent)))),
    }
}

pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}
