//! File formats, reports, parallel drivers and the command line for
//! [`steklov_core`].
//!
//! - [`mesh_io`]: mesh files (`"format": "steklov-mesh"`).
//! - [`report`]: the versioned report envelope and its CSV flattening.
//! - [`config`]: config files and flag/config/default precedence.
//! - [`parallel`]: rayon drivers for inequality grids and lemma fuzzing.
//! - [`cli`], [`commands`]: the `steklov` binary.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod json;
pub mod mesh_io;
pub mod parallel;
pub mod report;

pub use error::{LabError, LabResult, EXIT_INTERNAL, EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION};
