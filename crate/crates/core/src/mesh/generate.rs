//! Structured ring meshes for the reference domains.
//!
//! Every ring is uniformly spaced, starts at angle zero, and has a vertex
//! count that is a multiple of 8, so the meshes carry an exact 8-fold
//! rotational symmetry and the cos/sin eigenfunction pairs stay paired.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use core::f64::consts::PI;
use serde::{Deserialize, Serialize};

use super::{signed_area, Point, TriMesh};
use crate::{Error, Result};

/// Largest accepted refinement level (8 * 2^10 boundary vertices).
pub const MAX_REFINEMENT: u32 = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum DomainShape {
    Disk {
        radius: f64,
    },
    Annulus {
        r_inner: f64,
        r_outer: f64,
    },
    /// Star-shaped domain `r(θ) = r0 + Σ_j a_j cos jθ + b_j sin jθ`, with
    /// `a_j = cos_coeffs[j-1]` and `b_j = sin_coeffs[j-1]`.
    PerturbedDisk {
        base_radius: f64,
        cos_coeffs: Vec<f64>,
        sin_coeffs: Vec<f64>,
    },
    /// A mesh file; only the std companion crate can resolve it.
    FromFile {
        path: String,
    },
}

impl DomainShape {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Parameter(alloc::format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self {
            DomainShape::Disk { radius } => positive("radius", *radius),
            DomainShape::Annulus { r_inner, r_outer } => {
                positive("inner radius", *r_inner)?;
                positive("outer radius", *r_outer)?;
                if r_inner >= r_outer {
                    return Err(Error::Parameter(alloc::format!(
                        "inner radius {r_inner} must be smaller than outer radius {r_outer}"
                    )));
                }
                Ok(())
            }
            DomainShape::PerturbedDisk {
                base_radius,
                cos_coeffs,
                sin_coeffs,
            } => {
                positive("base radius", *base_radius)?;
                if cos_coeffs.iter().chain(sin_coeffs).any(|c| !c.is_finite()) {
                    return Err(Error::Parameter("Fourier coefficients must be finite".into()));
                }
                Ok(())
            }
            DomainShape::FromFile { path } => {
                if path.is_empty() {
                    return Err(Error::Parameter("mesh path is empty".into()));
                }
                Ok(())
            }
        }
    }

    /// `r(θ)` for star-shaped shapes.
    pub fn radius_at(&self, theta: f64) -> Option<f64> {
        match self {
            DomainShape::Disk { radius } => Some(*radius),
            DomainShape::PerturbedDisk {
                base_radius,
                cos_coeffs,
                sin_coeffs,
            } => {
                let mut r = *base_radius;
                for (j, a) in cos_coeffs.iter().enumerate() {
                    r += a * ((j + 1) as f64 * theta).cos();
                }
                for (j, b) in sin_coeffs.iter().enumerate() {
                    r += b * ((j + 1) as f64 * theta).sin();
                }
                Some(r)
            }
            _ => None,
        }
    }
}

/// Boundary vertex count of the outer loop at a refinement level.
pub fn boundary_count(refinement: u32) -> usize {
    8usize << refinement
}

/// Meshes a reference domain. The outer boundary has `8 * 2^refinement`
/// vertices placed exactly on the analytic curve.
pub fn generate(shape: &DomainShape, refinement: u32) -> Result<TriMesh> {
    shape.validate()?;
    if refinement == 0 || refinement > MAX_REFINEMENT {
        return Err(Error::Parameter(alloc::format!(
            "refinement must be in 1..={MAX_REFINEMENT}, got {refinement}"
        )));
    }
    let n_outer = boundary_count(refinement);
    match shape {
        DomainShape::Disk { .. } | DomainShape::PerturbedDisk { .. } => {
            check_star_radius(shape)?;
            let rings = 1usize << refinement;
            let layout: Vec<(f64, usize)> =
                (1..=rings).map(|j| (j as f64 / rings as f64, 8 * j)).collect();
            let radial = |theta: f64| shape.radius_at(theta).unwrap();
            let (vertices, triangles) = ring_mesh(&layout, true, radial);
            if let Some(t) = triangles
                .iter()
                .position(|t| !(signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) > 0.0))
            {
                return Err(Error::Geometry(alloc::format!(
                    "radial map folds triangle {t}: the perturbation is too strong for this mesh"
                )));
            }
            TriMesh::new(vertices, triangles)
        }
        DomainShape::Annulus { r_inner, r_outer } => {
            let width = r_outer - r_inner;
            let spacing = 2.0 * PI * r_outer / n_outer as f64;
            let layers = ((width / spacing).round() as usize).max(1);
            let layout: Vec<(f64, usize)> = (0..=layers)
                .map(|j| {
                    let rho = r_inner + width * j as f64 / layers as f64;
                    let sectors = ((n_outer as f64 * rho / (8.0 * r_outer)).round() as usize).max(1);
                    (rho, 8 * sectors)
                })
                .collect();
            let (vertices, triangles) = ring_mesh(&layout, false, |_| 1.0);
            TriMesh::new(vertices, triangles)
        }
        DomainShape::FromFile { .. } => Err(Error::Unsupported(
            "mesh files are loaded by the std companion crate, not generated".into(),
        )),
    }
}

fn check_star_radius(shape: &DomainShape) -> Result<()> {
    let degree = match shape {
        DomainShape::PerturbedDisk {
            cos_coeffs,
            sin_coeffs,
            ..
        } => cos_coeffs.len().max(sin_coeffs.len()),
        _ => 0,
    };
    let samples = 8192 * (degree + 1);
    for i in 0..samples {
        let theta = 2.0 * PI * i as f64 / samples as f64;
        let r = shape.radius_at(theta).unwrap();
        if !(r > 0.0) {
            return Err(Error::Geometry(alloc::format!(
                "boundary radius r(θ) = {r} is not positive at θ = {theta}"
            )));
        }
    }
    Ok(())
}

/// Concentric rings `(radius_or_fraction, count)`, innermost first. With
/// `center`, a vertex at the origin is fanned to the first ring and ring
/// positions are `fraction * radial(θ)`; otherwise they are `radius * radial(θ)`.
fn ring_mesh(
    layout: &[(f64, usize)],
    center: bool,
    radial: impl Fn(f64) -> f64,
) -> (Vec<Point>, Vec<[usize; 3]>) {
    let mut vertices: Vec<Point> = Vec::new();
    let mut starts = Vec::with_capacity(layout.len());
    if center {
        vertices.push([0.0, 0.0]);
    }
    for &(rho, count) in layout {
        starts.push(vertices.len());
        for i in 0..count {
            let theta = 2.0 * PI * i as f64 / count as f64;
            let r = rho * radial(theta);
            vertices.push([r * theta.cos(), r * theta.sin()]);
        }
    }
    let mut triangles = Vec::new();
    if center {
        let (s, n) = (starts[0], layout[0].1);
        for i in 0..n {
            triangles.push([0, s + i, s + (i + 1) % n]);
        }
    }
    for w in 0..layout.len().saturating_sub(1) {
        stitch(
            (starts[w], layout[w].1),
            (starts[w + 1], layout[w + 1].1),
            &mut triangles,
        );
    }
    (vertices, triangles)
}

/// Triangulates the strip between two uniformly spaced rings that both start
/// at angle zero, always advancing the ring whose next vertex comes first.
/// Angles are compared as exact fractions so ties break identically in
/// every symmetry sector.
fn stitch(inner: (usize, usize), outer: (usize, usize), out: &mut Vec<[usize; 3]>) {
    let (si, a) = inner;
    let (so, b) = outer;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a || j < b {
        let advance_inner = if i == a {
            false
        } else if j == b {
            true
        } else {
            // (i+1)/a <= (j+1)/b
            (i + 1) * b <= (j + 1) * a
        };
        if advance_inner {
            out.push([si + i % a, so + j % b, si + (i + 1) % a]);
            i += 1;
        } else {
            out.push([so + j % b, so + (j + 1) % b, si + i % a]);
            j += 1;
        }
    }
}
