//! Dense symmetric-definite eigensolver for pencils `(S, M)` whose kernel is
//! exactly the constant vector.

use alloc::vec::Vec;
use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;

use crate::{Error, Result};

/// Eigenvalues ascending; column `k` of `vectors` is `M`-orthonormal.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Eigenpairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> DVector<f64> {
        self.vectors.column(k).into_owned()
    }
}

/// Solves `S x = σ M x` with `M` symmetric positive definite and the constant
/// vector spanning the kernel of `S`. The constant mode is split off exactly
/// and reported as the eigenvalue `0`; the rest comes from a dense symmetric
/// eigensolve of `L⁻¹ S L⁻ᵀ` on the complement.
pub fn deflated_constant_eigen(s: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<Eigenpairs> {
    let n = s.nrows();
    if n == 0 || s.ncols() != n || m.nrows() != n || m.ncols() != n {
        return Err(Error::Internal("eigenproblem matrices must be square and equal-sized".into()));
    }
    let l = Cholesky::new(m.clone())
        .ok_or_else(|| Error::Internal("boundary mass matrix is not positive definite".into()))?
        .unpack();
    let sym = (s + s.transpose()) * 0.5;
    let x = l
        .solve_lower_triangular(&sym)
        .ok_or_else(|| Error::Internal("singular mass factor".into()))?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or_else(|| Error::Internal("singular mass factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;

    // the constant mode in the reduced variables
    let mut e = l.transpose() * DVector::from_element(n, 1.0);
    e /= e.norm();
    let lt = l.transpose();
    let lift = |y: DVector<f64>| -> Result<DVector<f64>> {
        lt.solve_upper_triangular(&y)
            .ok_or_else(|| Error::Internal("singular mass factor".into()))
    };
    let zero_vec = lift(e.clone())?;
    if n == 1 {
        return Ok(Eigenpairs { values: alloc::vec![0.0], vectors: DMatrix::from_column_slice(1, 1, zero_vec.as_slice()) });
    }

    // Householder reflector H with H e = α e_1
    let alpha = if e[0] >= 0.0 { -1.0 } else { 1.0 };
    let mut v = e.clone();
    v[0] -= alpha;
    let beta = 2.0 / v.norm_squared();
    let p = &c * &v * beta;
    let kk = 0.5 * beta * v.dot(&p);
    let w = &p - &v * kk;
    let hch = &c - &v * w.transpose() - &w * v.transpose();
    let block = hch.view((1, 1), (n - 1, n - 1)).into_owned();
    let block = (&block + block.transpose()) * 0.5;

    let scale = block.amax().max(f64::MIN_POSITIVE);
    let eig = SymmetricEigen::new(block);
    let mut order: Vec<usize> = (0..n - 1).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = Vec::with_capacity(n);
    let mut vectors = DMatrix::zeros(n, n);
    values.push(0.0);
    vectors.set_column(0, &zero_vec);
    for (col, &k) in order.iter().enumerate() {
        let mut value = eig.eigenvalues[k];
        if value < 0.0 {
            if value < -1e-10 * scale {
                return Err(Error::Internal(alloc::format!(
                    "eigenvalue {value:e} is negative beyond rounding; the kernel is larger than the constants"
                )));
            }
            value = 0.0;
        }
        let mut y = DVector::zeros(n);
        y.rows_mut(1, n - 1).copy_from(&eig.eigenvectors.column(k));
        let proj = beta * v.dot(&y);
        y -= &v * proj;
        vectors.set_column(col + 1, &lift(y)?);
        values.push(value);
    }
    Ok(Eigenpairs { values, vectors })
}
