use alloc::vec::Vec;

use crate::linalg::{CsrMatrix, TripletBuilder};
use crate::mesh::{dist, signed_area};
use crate::{Error, Result, TriMesh};

/// P1 stiffness matrix `K(i,j) = ∫ ∇φ_i·∇φ_j` over all vertices.
pub fn assemble_stiffness(mesh: &TriMesh) -> Result<CsrMatrix> {
    let v = mesh.vertices();
    let mut builder = TripletBuilder::new(v.len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let p = [v[tri[0]], v[tri[1]], v[tri[2]]];
        let area = signed_area(p[0], p[1], p[2]);
        if !(area > 0.0) {
            return Err(Error::Assembly(alloc::format!(
                "triangle {t} has nonpositive area {area:e}"
            )));
        }
        // ∇φ_i = (b_i, c_i) / (2 area)
        let mut b = [0.0; 3];
        let mut c = [0.0; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            b[i] = p[j][1] - p[k][1];
            c[i] = p[k][0] - p[j][0];
        }
        for i in 0..3 {
            for j in 0..3 {
                builder.add(tri[i], tri[j], (b[i] * b[j] + c[i] * c[j]) / (4.0 * area));
            }
        }
    }
    Ok(builder.build())
}

/// Consistent 1D mass on boundary edges: `h/6 [[2,1],[1,2]]` per edge.
pub fn assemble_boundary_mass(mesh: &TriMesh) -> CsrMatrix {
    edge_assembly(mesh, |h| [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]])
}

/// Tangential stiffness `∫ ∂_s u ∂_s w` on the boundary curve, with the
/// per-edge difference quotient integrated by the midpoint rule.
pub fn assemble_boundary_stiffness(mesh: &TriMesh) -> CsrMatrix {
    edge_assembly(mesh, |h| [[1.0 / h, -1.0 / h], [-1.0 / h, 1.0 / h]])
}

fn edge_assembly(mesh: &TriMesh, element: impl Fn(f64) -> [[f64; 2]; 2]) -> CsrMatrix {
    let v = mesh.vertices();
    let mut builder = TripletBuilder::new(v.len());
    for lp in mesh.boundary_loops() {
        for (a, b) in loop_edges(lp) {
            let e = element(dist(v[a], v[b]));
            let ids = [a, b];
            for i in 0..2 {
                for j in 0..2 {
                    builder.add(ids[i], ids[j], e[i][j]);
                }
            }
        }
    }
    builder.build()
}

/// Directed edges of a loop, domain on the left.
pub(crate) fn loop_edges(lp: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..lp.len()).map(move |i| (lp[i], lp[(i + 1) % lp.len()]))
}

/// Load vector of `-∂u/∂s` on the boundary: the Neumann datum of the
/// harmonic conjugate of `u`.
pub(crate) fn conjugate_flux(mesh: &TriMesh, u: &[f64]) -> Vec<f64> {
    let mut g = alloc::vec![0.0; mesh.vertex_count()];
    for lp in mesh.boundary_loops() {
        for (a, b) in loop_edges(lp) {
            let half_jump = 0.5 * (u[b] - u[a]);
            g[a] -= half_jump;
            g[b] -= half_jump;
        }
    }
    g
}
