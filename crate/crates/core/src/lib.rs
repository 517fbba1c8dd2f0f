//! Numerical laboratory for Steklov (Dirichlet-to-Neumann) and boundary-Laplacian
//! spectra of planar domains, together with the majorization and matrix
//! inequalities used to bound them.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! and parallel drivers live in the `steklov-lab` companion crate.
//!
//! Module map:
//!
//! - [`mesh`]: planar triangle meshes, reference-domain generators, topology.
//! - [`fem`]: P1 stiffness and boundary mass, discrete Dirichlet-to-Neumann map,
//!   Steklov and boundary-Laplacian spectra, harmonic extension and conjugates,
//!   witness matrices.
//! - [`analytic`]: closed-form spectra of disks, circles and annuli.
//! - [`ineq`]: majorization, Schur/Hadamard checks, compound matrices and the
//!   matrix lemmas, plus a seeded fuzz generator.
//! - [`suite`]: evaluators for the trace and inverse-trace inequalities.

#![no_std]

extern crate alloc;

pub mod analytic;
mod error;
pub mod fem;
pub mod ineq;
pub mod linalg;
pub mod mesh;
pub mod spectrum;
pub mod suite;

pub use error::{Error, ErrorClass, Result};
pub use linalg::SpdMatrix;
pub use mesh::{DomainShape, DomainTopology, TriMesh};
pub use spectrum::{Spectrum, SpectrumKind, SpectrumSource};
