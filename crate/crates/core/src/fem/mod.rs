//! P1 finite elements on planar triangle meshes: stiffness and boundary mass,
//! the discrete Dirichlet-to-Neumann map as a Schur complement, Steklov and
//! boundary-Laplacian spectra, harmonic extensions and conjugates, and the
//! witness matrices that bound Steklov eigenvalues from above.

mod assemble;
mod eigen;
mod witness;

pub use assemble::{assemble_boundary_mass, assemble_boundary_stiffness, assemble_stiffness};
pub use eigen::{deflated_constant_eigen, Eigenpairs};
pub use witness::{WitnessCheck, WitnessPair};

use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::linalg::{CsrMatrix, EnvelopeCholesky};
use crate::spectrum::FEM_TOLERANCE;
use crate::{Error, Result, Spectrum, SpectrumKind, SpectrumSource, TriMesh};

/// Operators of one mesh, assembled and factored once.
///
/// Boundary quantities (the DtN matrix, boundary mass, eigenvectors and
/// boundary data) are indexed by position in [`FemProblem::boundary_vertices`],
/// which lists the boundary loops one after another.
#[derive(Debug, Clone)]
pub struct FemProblem {
    mesh: TriMesh,
    refinement: Option<u32>,
    stiffness: CsrMatrix,
    boundary_mass: CsrMatrix,
    boundary_stiffness: CsrMatrix,
    boundary: Vec<usize>,
    interior: Vec<usize>,
    interior_factor: Option<EnvelopeCholesky>,
    dtn: DMatrix<f64>,
    mass_b: DMatrix<f64>,
}

impl FemProblem {
    pub fn new(mesh: &TriMesh) -> Result<Self> {
        let stiffness = assemble_stiffness(mesh)?;
        let boundary_mass = assemble_boundary_mass(mesh);
        let boundary_stiffness = assemble_boundary_stiffness(mesh);
        let boundary = mesh.boundary_vertices();
        let flags = mesh.is_boundary_vertex();
        let interior: Vec<usize> = (0..mesh.vertex_count()).filter(|&v| !flags[v]).collect();
        let interior_factor = if interior.is_empty() {
            None
        } else {
            Some(EnvelopeCholesky::factor_submatrix(&stiffness, &interior)?)
        };

        let nb = boundary.len();
        let mut local = alloc::vec![usize::MAX; mesh.vertex_count()];
        for (pos, &v) in boundary.iter().enumerate() {
            local[v] = pos;
        }
        let mut dtn = DMatrix::zeros(nb, nb);
        let mut mass_b = DMatrix::zeros(nb, nb);
        for (i, &v) in boundary.iter().enumerate() {
            for (w, val) in stiffness.row(v) {
                if local[w] != usize::MAX {
                    dtn[(i, local[w])] += val;
                }
            }
            for (w, val) in boundary_mass.row(v) {
                mass_b[(i, local[w])] += val;
            }
        }
        if let Some(factor) = &interior_factor {
            let mut interior_pos = alloc::vec![usize::MAX; mesh.vertex_count()];
            for (pos, &v) in interior.iter().enumerate() {
                interior_pos[v] = pos;
            }
            // Λ = K_bb − K_bi K_ii⁻¹ K_ib, one interior solve per boundary
            // vertex that touches the interior
            let mut rhs = alloc::vec![0.0; interior.len()];
            for (j, &vj) in boundary.iter().enumerate() {
                let mut touches = false;
                for (w, val) in stiffness.row(vj) {
                    if interior_pos[w] != usize::MAX {
                        rhs[interior_pos[w]] = val;
                        touches = true;
                    }
                }
                if !touches {
                    continue;
                }
                let x = factor.solve(&rhs);
                for (w, _) in stiffness.row(vj) {
                    if interior_pos[w] != usize::MAX {
                        rhs[interior_pos[w]] = 0.0;
                    }
                }
                for (i, &vi) in boundary.iter().enumerate() {
                    let mut acc = 0.0;
                    for (w, val) in stiffness.row(vi) {
                        if interior_pos[w] != usize::MAX {
                            acc += val * x[interior_pos[w]];
                        }
                    }
                    dtn[(i, j)] -= acc;
                }
            }
        }

        Ok(FemProblem {
            mesh: mesh.clone(),
            refinement: None,
            stiffness,
            boundary_mass,
            boundary_stiffness,
            boundary,
            interior,
            interior_factor,
            dtn,
            mass_b,
        })
    }

    /// Records the generator refinement level in spectrum provenance.
    pub fn with_refinement(mut self, refinement: u32) -> Self {
        self.refinement = Some(refinement);
        self
    }

    pub fn mesh(&self) -> &TriMesh {
        &self.mesh
    }

    pub fn stiffness(&self) -> &CsrMatrix {
        &self.stiffness
    }

    pub fn boundary_mass(&self) -> &CsrMatrix {
        &self.boundary_mass
    }

    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary
    }

    pub fn interior_vertices(&self) -> &[usize] {
        &self.interior
    }

    /// Dense DtN matrix on the boundary vertices.
    pub fn dtn(&self) -> &DMatrix<f64> {
        &self.dtn
    }

    /// Boundary mass restricted to the boundary vertices.
    pub fn boundary_mass_dense(&self) -> &DMatrix<f64> {
        &self.mass_b
    }

    pub fn source(&self) -> SpectrumSource {
        SpectrumSource::Fem {
            mesh_id: self.mesh.fingerprint(),
            refinement: self.refinement,
            boundary_loops: self.mesh.boundary_loops().len(),
        }
    }

    fn check_count(&self, count: usize) -> Result<()> {
        let nb = self.boundary.len();
        if count == 0 {
            return Err(Error::Parameter("eigenvalue count must be at least 1".into()));
        }
        if count > nb {
            return Err(Error::index("eigenvalues (one per boundary vertex)", count, nb));
        }
        Ok(())
    }

    /// The `count` smallest Steklov eigenpairs `Λx = σ M_b x`.
    pub fn steklov_eigenpairs(&self, count: usize) -> Result<Eigenpairs> {
        self.check_count(count)?;
        let mut pairs = deflated_constant_eigen(&self.dtn, &self.mass_b)?;
        pairs.values.truncate(count);
        pairs.vectors = pairs.vectors.columns(0, count).into_owned();
        Ok(pairs)
    }

    pub fn steklov_spectrum(&self, count: usize) -> Result<Spectrum> {
        let pairs = self.steklov_eigenpairs(count)?;
        Spectrum::new(pairs.values, SpectrumKind::Steklov, self.source(), FEM_TOLERANCE)
    }

    /// The `count` smallest eigenpairs of the Laplacian of the boundary curve,
    /// merged over loops. Each loop contributes one zero.
    pub fn boundary_laplacian_eigenpairs(&self, count: usize) -> Result<Eigenpairs> {
        self.check_count(count)?;
        let nb = self.boundary.len();
        let mut all: Vec<(f64, usize, usize)> = Vec::with_capacity(nb);
        let mut per_loop = Vec::new();
        let mut start = 0;
        for (l, lp) in self.mesh.boundary_loops().iter().enumerate() {
            let n = lp.len();
            let dense = |m: &CsrMatrix| DMatrix::from_fn(n, n, |i, j| m.get(lp[i], lp[j]));
            let pairs = deflated_constant_eigen(&dense(&self.boundary_stiffness), &dense(&self.boundary_mass))?;
            all.extend(pairs.values.iter().enumerate().map(|(k, &v)| (v, l, k)));
            per_loop.push((start, pairs));
            start += n;
        }
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        all.truncate(count);
        let mut vectors = DMatrix::zeros(nb, count);
        let mut values = Vec::with_capacity(count);
        for (col, &(value, l, k)) in all.iter().enumerate() {
            let (offset, pairs) = &per_loop[l];
            let n = pairs.vectors.nrows();
            vectors.view_mut((*offset, col), (n, 1)).copy_from(&pairs.vectors.column(k));
            values.push(value);
        }
        Ok(Eigenpairs { values, vectors })
    }

    pub fn boundary_laplacian_spectrum(&self, count: usize) -> Result<Spectrum> {
        let pairs = self.boundary_laplacian_eigenpairs(count)?;
        Spectrum::new(pairs.values, SpectrumKind::BoundaryLaplacian, self.source(), FEM_TOLERANCE)
    }

    /// Discrete harmonic function with the given boundary values (ordered as
    /// [`FemProblem::boundary_vertices`]), returned on all vertices.
    pub fn harmonic_extension(&self, boundary_values: &[f64]) -> Result<Vec<f64>> {
        if boundary_values.len() != self.boundary.len() {
            return Err(Error::Size(alloc::format!(
                "expected {} boundary values, got {}",
                self.boundary.len(),
                boundary_values.len()
            )));
        }
        let mut u = alloc::vec![0.0; self.mesh.vertex_count()];
        for (&v, &val) in self.boundary.iter().zip(boundary_values) {
            u[v] = val;
        }
        if let Some(factor) = &self.interior_factor {
            let rhs: Vec<f64> = self
                .interior
                .iter()
                .map(|&i| -self.stiffness.row(i).map(|(j, k)| k * u[j]).sum::<f64>())
                .collect();
            let ui = factor.solve(&rhs);
            for (&i, val) in self.interior.iter().zip(ui) {
                u[i] = val;
            }
        }
        Ok(u)
    }

    /// Restriction of a vertex function to the boundary, in boundary order.
    pub fn boundary_values(&self, u: &[f64]) -> Vec<f64> {
        self.boundary.iter().map(|&v| u[v]).collect()
    }

    /// Factorization of `K` with one boundary vertex pinned, for the Neumann
    /// problems behind harmonic conjugates.
    pub(crate) fn conjugate_solver(&self) -> Result<ConjugateSolver<'_>> {
        let topo = self.mesh.topology()?;
        if topo.b1 != 0 {
            return Err(Error::Topology(alloc::format!(
                "harmonic conjugates are multivalued when b1 = {} > 0",
                topo.b1
            )));
        }
        let pin = self.boundary[0];
        let free: Vec<usize> = (0..self.mesh.vertex_count()).filter(|&v| v != pin).collect();
        let factor = EnvelopeCholesky::factor_submatrix(&self.stiffness, &free)?;
        Ok(ConjugateSolver { problem: self, free, factor })
    }

    /// Harmonic conjugate `v` of a discrete harmonic `u` (`∇v = rot ∇u`),
    /// normalized to zero mean over the boundary.
    pub fn harmonic_conjugate(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.conjugate_solver()?.conjugate(u)
    }
}

pub(crate) struct ConjugateSolver<'a> {
    problem: &'a FemProblem,
    free: Vec<usize>,
    factor: EnvelopeCholesky,
}

impl ConjugateSolver<'_> {
    pub(crate) fn conjugate(&self, u: &[f64]) -> Result<Vec<f64>> {
        let p = self.problem;
        let nv = p.mesh.vertex_count();
        if u.len() != nv {
            return Err(Error::Size(alloc::format!("expected {nv} vertex values, got {}", u.len())));
        }
        let ku = p.stiffness.mul_vec(u);
        let u_max = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let limit = 1e-8 * p.stiffness.max_abs() * u_max;
        if let Some(&i) = p.interior.iter().find(|&&i| ku[i].abs() > limit) {
            return Err(Error::Precondition(alloc::format!(
                "function is not discrete harmonic: residual {:e} at interior vertex {i}",
                ku[i]
            )));
        }
        let g = assemble::conjugate_flux(&p.mesh, u);
        let rhs: Vec<f64> = self.free.iter().map(|&v| g[v]).collect();
        let sol = self.factor.solve(&rhs);
        let mut v = alloc::vec![0.0; nv];
        for (&i, val) in self.free.iter().zip(sol) {
            v[i] = val;
        }
        let weights = p.boundary_mass.mul_vec(&alloc::vec![1.0; nv]);
        let mean = weights.iter().zip(&v).map(|(w, x)| w * x).sum::<f64>() / p.mesh.boundary_length();
        for x in &mut v {
            *x -= mean;
        }
        Ok(v)
    }
}

pub fn dtn_matrix(mesh: &TriMesh) -> Result<DMatrix<f64>> {
    Ok(FemProblem::new(mesh)?.dtn)
}

pub fn steklov_spectrum(mesh: &TriMesh, count: usize) -> Result<Spectrum> {
    FemProblem::new(mesh)?.steklov_spectrum(count)
}

pub fn boundary_laplacian_spectrum(mesh: &TriMesh, count: usize) -> Result<Spectrum> {
    FemProblem::new(mesh)?.boundary_laplacian_spectrum(count)
}

pub fn harmonic_extension(mesh: &TriMesh, boundary_values: &[f64]) -> Result<Vec<f64>> {
    FemProblem::new(mesh)?.harmonic_extension(boundary_values)
}

pub fn harmonic_conjugate(mesh: &TriMesh, u: &[f64]) -> Result<Vec<f64>> {
    FemProblem::new(mesh)?.harmonic_conjugate(u)
}

pub fn witness_matrices(mesh: &TriMesh, r: usize, s: usize, m: usize) -> Result<WitnessPair> {
    FemProblem::new(mesh)?.witness_matrices(r, s, m)
}
