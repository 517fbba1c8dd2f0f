use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SVD};
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::FemProblem;
use crate::{Error, Result, SpdMatrix, Spectrum};

/// Matrices `A` and `B` of a constrained family of harmonic functions
/// `u_1..u_m` (Dirichlet-orthonormal):
/// `A⁻¹(i,j) = ∫_∂ u_i u_j` and `B(i,j) = ∫_∂ ∂_s u_i ∂_s u_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub a: SpdMatrix,
    /// Boundary Gram matrix of the `u_i`, i.e. `A⁻¹`.
    pub a_inverse: SpdMatrix,
    pub b: SpdMatrix,
    pub r: usize,
    pub s: usize,
    pub m: usize,
    /// `λ_{r+s+i-1}` of the boundary curve, `i = 1..m`.
    pub diag_ratio_bounds: Vec<f64>,
}

/// Outcome of comparing a witness pair with a Steklov spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub eig_a: Vec<f64>,
    pub eig_b: Vec<f64>,
    /// `σ_{r+i}`
    pub sigma_a: Vec<f64>,
    /// `σ_{s+i}`
    pub sigma_b: Vec<f64>,
    /// `B(i,i) / A⁻¹(i,i)`
    pub diag_ratios: Vec<f64>,
    pub diag_ratio_bounds: Vec<f64>,
    pub a_bound_holds: bool,
    pub b_bound_holds: bool,
    pub ratio_bound_holds: bool,
}

impl WitnessCheck {
    pub fn pass(&self) -> bool {
        self.a_bound_holds && self.b_bound_holds && self.ratio_bound_holds
    }
}

impl WitnessPair {
    /// `σ_{r+i} ≤ λ_i(A)`, `σ_{s+i} ≤ λ_i(B)` and
    /// `B(i,i) ≤ A⁻¹(i,i) λ_{r+s+i-1}`, each up to a relative `tolerance`.
    pub fn check(&self, sigma: &Spectrum, tolerance: f64) -> Result<WitnessCheck> {
        let eig_a = self.a.eigenvalues();
        let eig_b = self.b.eigenvalues();
        let mut sigma_a = Vec::with_capacity(self.m);
        let mut sigma_b = Vec::with_capacity(self.m);
        for i in 1..=self.m {
            sigma_a.push(sigma.get(self.r + i)?);
            sigma_b.push(sigma.get(self.s + i)?);
        }
        let diag_ratios: Vec<f64> = (0..self.m)
            .map(|i| self.b.get(i, i) / self.a_inverse.get(i, i))
            .collect();
        let below = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(a, b)| *a <= b * (1.0 + tolerance));
        Ok(WitnessCheck {
            a_bound_holds: below(&sigma_a, &eig_a),
            b_bound_holds: below(&sigma_b, &eig_b),
            ratio_bound_holds: below(&diag_ratios, &self.diag_ratio_bounds),
            eig_a,
            eig_b,
            sigma_a,
            sigma_b,
            diag_ratios,
            diag_ratio_bounds: self.diag_ratio_bounds.clone(),
        })
    }
}

const NULL_THRESHOLD: f64 = 1e-10;

impl FemProblem {
    /// Builds `u_k` in the span of the harmonic extensions of boundary
    /// eigenfunctions `φ_2..φ_{r+s+k-1}`, subject to `u_k ⟂ ψ_1..ψ_{r-1}`,
    /// conjugate `⟂ ψ_1..ψ_{s-1}` (ψ the Steklov eigenfunctions with positive
    /// eigenvalue) and Dirichlet orthogonality to `u_1..u_{k-1}`. Needs a
    /// simply connected mesh.
    pub fn witness_matrices(&self, r: usize, s: usize, m: usize) -> Result<WitnessPair> {
        if r == 0 || s == 0 || m == 0 {
            return Err(Error::Parameter(alloc::format!(
                "r, s, m must be positive, got ({r}, {s}, {m})"
            )));
        }
        let solver = self.conjugate_solver()?;
        let nb = self.boundary.len();
        let top = r + s + m - 1;
        if top > nb {
            return Err(Error::Parameter(alloc::format!(
                "(r, s, m) = ({r}, {s}, {m}) needs {top} boundary eigenfunctions but the boundary has {nb} vertices"
            )));
        }
        let phi = self.boundary_laplacian_eigenpairs(top)?;
        let psi = self.steklov_eigenpairs(r.max(s))?;
        let mb = &self.mass_b;
        let dtn = &self.dtn;

        let basis: Vec<DVector<f64>> = (1..top).map(|j| phi.vector(j)).collect();
        let mut conj = Vec::with_capacity(basis.len());
        for f in &basis {
            let ext = self.harmonic_extension(f.as_slice())?;
            conj.push(DVector::from_vec(self.boundary_values(&solver.conjugate(&ext)?)));
        }

        let mut us: Vec<DVector<f64>> = Vec::with_capacity(m);
        for k in 1..=m {
            let unknowns = r + s + k - 2;
            let mut rows: Vec<Vec<f64>> = Vec::new();
            for i in 1..r {
                let w = mb * psi.vector(i);
                rows.push(basis[..unknowns].iter().map(|f| w.dot(f)).collect());
            }
            for i in 1..s {
                let w = mb * psi.vector(i);
                rows.push(conj[..unknowns].iter().map(|f| w.dot(f)).collect());
            }
            for u in &us {
                let w = dtn * u;
                rows.push(basis[..unknowns].iter().map(|f| w.dot(f)).collect());
            }
            let c = minimal_null_direction(&rows, unknowns)?;
            let mut u = DVector::zeros(nb);
            for (cj, f) in c.iter().zip(&basis) {
                u.axpy(*cj, f, 1.0);
            }
            let energy = u.dot(&(dtn * &u));
            let boundary_norm = u.dot(&(mb * &u));
            if !(energy > 1e-12 * dtn.amax() * boundary_norm) {
                return Err(Error::Construction(alloc::format!(
                    "u_{k} has negligible Dirichlet energy {energy:e} (boundary norm {boundary_norm:e})"
                )));
            }
            u /= energy.sqrt();
            us.push(u);
        }

        let stiff_b = DMatrix::from_fn(nb, nb, |i, j| self.boundary_stiffness.get(self.boundary[i], self.boundary[j]));
        let gram = DMatrix::from_fn(m, m, |i, j| us[i].dot(&(mb * &us[j])));
        let gram = (&gram + gram.transpose()) * 0.5;
        let b = DMatrix::from_fn(m, m, |i, j| us[i].dot(&(&stiff_b * &us[j])));
        let b = (&b + b.transpose()) * 0.5;
        let a = gram
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Construction("boundary Gram matrix of the u_i is not positive definite".into()))?
            .inverse();
        let a = (&a + a.transpose()) * 0.5;

        let to_spd = |x: &DMatrix<f64>| SpdMatrix::from_fn(m, |i, j| x[(i, j)]);
        let diag_ratio_bounds = (1..=m).map(|i| phi.values[r + s + i - 2]).collect();
        Ok(WitnessPair {
            a: to_spd(&a)?,
            a_inverse: to_spd(&gram)?,
            b: to_spd(&b)?,
            r,
            s,
            m,
            diag_ratio_bounds,
        })
    }
}

/// A unit vector in the null space of `rows` (each of length `cols`), chosen
/// with the fewest trailing nonzero coordinates; first significant entry
/// positive.
fn minimal_null_direction(rows: &[Vec<f64>], cols: usize) -> Result<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = if rows.is_empty() {
        (0..cols).map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect()
    } else {
        let mut mat = DMatrix::zeros(cols.max(rows.len()), cols);
        for (i, row) in rows.iter().enumerate() {
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                for (j, x) in row.iter().enumerate() {
                    mat[(i, j)] = x / norm;
                }
            }
        }
        let svd = SVD::new(mat, false, true);
        let v_t = svd.v_t.ok_or_else(|| Error::Internal("SVD did not return right singular vectors".into()))?;
        let sigma_max = svd.singular_values.max();
        svd.singular_values
            .iter()
            .enumerate()
            .filter(|&(_, &sv)| sv <= NULL_THRESHOLD * sigma_max)
            .map(|(i, _)| v_t.row(i).iter().copied().collect())
            .collect()
    };
    if basis.is_empty() {
        return Err(Error::Construction(alloc::format!(
            "{} constraints on {cols} unknowns left no null direction",
            rows.len()
        )));
    }
    for idx in (0..cols).rev() {
        if basis.len() == 1 {
            break;
        }
        let (pivot, size) = basis
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v[idx].abs()))
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if size <= 1e-12 {
            continue;
        }
        let p = basis.swap_remove(pivot);
        for v in &mut basis {
            let f = v[idx] / p[idx];
            for (x, y) in v.iter_mut().zip(&p) {
                *x -= f * y;
            }
            v[idx] = 0.0;
        }
    }
    let mut c = basis.swap_remove(0);
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    let lead = c.iter().copied().find(|x| x.abs() > 1e-8 * norm).unwrap_or(1.0);
    let scale = lead.signum() / norm;
    for x in &mut c {
        *x *= scale;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_direction_prefers_low_indices() {
        // x1 - x2 = 0 on R^3: null space spanned by (1,1,0), (0,0,1)
        let c = minimal_null_direction(&[alloc::vec![1.0, -1.0, 0.0]], 3).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((c[0] - h).abs() < 1e-12 && (c[1] - h).abs() < 1e-12 && c[2].abs() < 1e-12, "{c:?}");
        let c = minimal_null_direction(&[], 2).unwrap();
        assert_eq!(c, alloc::vec![1.0, 0.0]);
        let c = minimal_null_direction(&[alloc::vec![0.0, 2.0]], 2).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12 && c[1].abs() < 1e-12);
    }
}
