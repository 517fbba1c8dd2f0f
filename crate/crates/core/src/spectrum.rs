use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticDomain;
use crate::{Error, Result};

/// Default tolerance attached to closed-form spectra.
pub const ANALYTIC_TOLERANCE: f64 = 1e-9;
/// Default tolerance attached to finite-element spectra at default refinement.
pub const FEM_TOLERANCE: f64 = 2e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    Steklov,
    BoundaryLaplacian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SpectrumSource {
    Analytic {
        domain: AnalyticDomain,
    },
    Fem {
        mesh_id: String,
        refinement: Option<u32>,
        boundary_loops: usize,
    },
}

impl SpectrumSource {
    /// Number of boundary components of the underlying domain.
    pub fn boundary_components(&self) -> usize {
        match self {
            SpectrumSource::Analytic { domain } => domain.boundary_components(),
            SpectrumSource::Fem { boundary_loops, .. } => *boundary_loops,
        }
    }
}

/// Ascending eigenvalue list. Storage is 0-based; [`Spectrum::get`] takes the
/// 1-based index used when stating eigenvalue inequalities (`σ_1 = 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
    kind: SpectrumKind,
    source: SpectrumSource,
    count: usize,
    tolerance: f64,
}

impl Spectrum {
    pub fn new(
        values: Vec<f64>,
        kind: SpectrumKind,
        source: SpectrumSource,
        tolerance: f64,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("spectrum must hold at least one value".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Internal(alloc::format!(
                "spectrum value {v} is negative or not finite"
            )));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Internal("spectrum values are not ascending".into()));
        }
        if !(tolerance >= 0.0 && tolerance.is_finite()) {
            return Err(Error::Parameter(alloc::format!("bad tolerance {tolerance}")));
        }
        let count = values.len();
        Ok(Spectrum {
            values,
            kind,
            source,
            count,
            tolerance,
        })
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

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn source(&self) -> &SpectrumSource {
        &self.source
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.source, SpectrumSource::Analytic { .. })
    }

    /// The `k`-th eigenvalue, 1-based.
    pub fn get(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.values.len() {
            return Err(Error::index(
                alloc::format!("{:?} spectrum", self.kind),
                k,
                self.values.len(),
            ));
        }
        Ok(self.values[k - 1])
    }
}
