//! Dense and sparse linear algebra used across the crate.
//!
//! The FEM module leans on `nalgebra` for its dense symmetric eigensolver;
//! everything here is self-contained so the inequality checks keep an
//! independent eigenvalue path ([`jacobi`]).

mod combin;
mod dense;
mod envelope;
pub mod jacobi;
mod sparse;

pub use combin::{binomial, Combinations};
pub use dense::{determinant, principal_minor};
pub use envelope::EnvelopeCholesky;
pub use sparse::{CsrMatrix, TripletBuilder};

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative symmetry tolerance accepted by [`SpdMatrix::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Dense symmetric matrix, nominally positive definite.
///
/// Symmetry is enforced at construction; positivity is checked on demand
/// with [`SpdMatrix::check_positive_definite`] because several callers
/// (Schur's theorem, for one) only need symmetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpdMatrixRepr", into = "SpdMatrixRepr")]
pub struct SpdMatrix {
    order: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct SpdMatrixRepr {
    order: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<SpdMatrixRepr> for SpdMatrix {
    type Error = Error;

    fn try_from(repr: SpdMatrixRepr) -> Result<Self> {
        if repr.rows.len() != repr.order || repr.rows.iter().any(|r| r.len() != repr.order) {
            return Err(Error::Input(alloc::format!(
                "matrix rows do not form a {0}x{0} square",
                repr.order
            )));
        }
        SpdMatrix::new(repr.order, repr.rows.into_iter().flatten().collect())
    }
}

impl From<SpdMatrix> for SpdMatrixRepr {
    fn from(m: SpdMatrix) -> Self {
        SpdMatrixRepr {
            order: m.order,
            rows: m.data.chunks(m.order.max(1)).map(|r| r.to_vec()).collect(),
        }
    }
}

impl SpdMatrix {
    /// Builds a matrix from row-major entries, rejecting asymmetric input.
    pub fn new(order: usize, data: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Input("matrix order must be positive".into()));
        }
        if data.len() != order * order {
            return Err(Error::Input(alloc::format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("matrix has non-finite entries".into()));
        }
        let scale = data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        for i in 0..order {
            for j in 0..i {
                let (a, b) = (data[i * order + j], data[j * order + i]);
                if (a - b).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::Input(alloc::format!(
                        "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(SpdMatrix { order, data })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                data.push(f(i, j));
            }
        }
        Self::new(order, data)
    }

    pub fn identity(order: usize) -> Self {
        let mut data = alloc::vec![0.0; order * order];
        for i in 0..order {
            data[i * order + i] = 1.0;
        }
        SpdMatrix { order, data }
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Eigenvalues in ascending order, from the cyclic Jacobi solver.
    pub fn eigenvalues(&self) -> Vec<f64> {
        jacobi::eigenvalues(self.order, &self.data)
    }

    /// Requires the smallest eigenvalue to be at least `1e-8` times the
    /// spectral radius; returns the ascending eigenvalues on success.
    pub fn check_positive_definite(&self) -> Result<Vec<f64>> {
        let eig = self.eigenvalues();
        let radius = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let smallest = eig[0];
        if !(smallest > 0.0 && smallest >= 1e-8 * radius) {
            return Err(Error::Input(alloc::format!(
                "matrix is not safely positive definite: smallest eigenvalue {smallest:e}, spectral radius {radius:e}"
            )));
        }
        Ok(eig)
    }
}
