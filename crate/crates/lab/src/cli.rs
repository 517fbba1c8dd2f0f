//! Command-line definitions for the `steklov` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use steklov_core::analytic::AnalyticDomain;
use steklov_core::ineq::fuzz::LemmaKind;
use steklov_core::mesh::DomainShape;
use steklov_core::SpectrumKind;

use crate::config::{FileConfig, OutputFormat, Overrides, RunConfig};
use crate::{commands, LabError, LabResult};

#[derive(Debug, Parser)]
#[command(
    name = "steklov",
    version,
    about = "Steklov and boundary-Laplacian spectra of planar domains, and the trace inequalities they satisfy"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct GlobalArgs {
    /// Config file (JSON with "format": "steklov-config").
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; defaults to $STEKLOV_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Replaces the tolerance attached to every spectrum.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Strictly increasing refinement levels, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub levels: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub refinement: Option<u32>,
    /// Leave the timestamp out of reports so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a mesh file.
    Mesh(MeshArgs),
    /// Compute a Steklov or boundary-Laplacian spectrum.
    Spectrum(SpectrumArgs),
    /// Evaluate one inequality, or the standard grid with `--inequality all`.
    Verify(VerifyArgs),
    /// Eigenvalue errors and inequality slacks over refinement levels.
    Convergence(ConvergenceArgs),
    /// Fuzz the matrix lemmas.
    Lemmas(LemmasArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Disk,
    Annulus,
    Perturbed,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ShapeArgs {
    #[arg(long, value_enum)]
    pub shape: Option<ShapeKind>,
    /// Disk radius, or base radius of a perturbed disk.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub inner: Option<f64>,
    #[arg(long)]
    pub outer: Option<f64>,
    /// Cosine coefficients of the boundary radius, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub cos: Vec<f64>,
    /// Sine coefficients of the boundary radius, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sin: Vec<f64>,
}

impl ShapeArgs {
    pub fn to_shape(&self) -> Option<DomainShape> {
        let radius = self.radius.unwrap_or(1.0);
        Some(match self.shape? {
            ShapeKind::Disk => DomainShape::Disk { radius },
            ShapeKind::Annulus => DomainShape::Annulus {
                r_inner: self.inner.unwrap_or(0.5),
                r_outer: self.outer.unwrap_or(1.0),
            },
            ShapeKind::Perturbed => DomainShape::PerturbedDisk {
                base_radius: radius,
                cos_coeffs: self.cos.clone(),
                sin_coeffs: self.sin.clone(),
            },
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeshArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct SourceArgs {
    /// Closed-form spectra: disk:R, circle:L or annulus:A,B.
    #[arg(long, conflicts_with_all = ["mesh", "shape"])]
    pub analytic: Option<String>,
    /// Mesh file.
    #[arg(long, conflicts_with = "shape")]
    pub mesh: Option<PathBuf>,
    #[command(flatten)]
    pub shape: ShapeArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Steklov,
    BoundaryLaplacian,
}

impl From<KindArg> for SpectrumKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Steklov => SpectrumKind::Steklov,
            KindArg::BoundaryLaplacian => SpectrumKind::BoundaryLaplacian,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value = "steklov")]
    pub kind: KindArg,
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityName {
    Thm1,
    Thm2,
    Yy,
    Hps,
    Gp,
    K,
    HpsTrace,
    Majorized,
    #[value(name = "inverse-trace-2")]
    #[serde(rename = "inverse-trace-2")]
    InverseTrace2,
    PowerQ,
    Cor1,
    Cor2,
    ProbeOpen,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadingArg {
    SBased,
    RBased,
    Literal,
    Paired,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub inequality: InequalityName,
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Weights a_1 >= ... >= a_m >= 0, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<f64>>,
    /// Weights c_1 >= ... >= c_m > 0, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    /// The n → ∞ form of cor1.
    #[arg(long)]
    pub limit: bool,
    #[arg(long, value_enum)]
    pub reading: Option<ReadingArg>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Eigenvalues compared per kind.
    #[arg(long)]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaArg {
    Part1,
    Part2,
    Part3,
    Young,
    Hadamard,
    Schur,
    Compound,
}

impl From<LemmaArg> for LemmaKind {
    fn from(k: LemmaArg) -> Self {
        match k {
            LemmaArg::Part1 => LemmaKind::Part1,
            LemmaArg::Part2 => LemmaKind::Part2,
            LemmaArg::Part3 => LemmaKind::Part3,
            LemmaArg::Young => LemmaKind::Young,
            LemmaArg::Hadamard => LemmaKind::Hadamard,
            LemmaArg::Schur => LemmaKind::Schur,
            LemmaArg::Compound => LemmaKind::Compound,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LemmasArgs {
    #[arg(long)]
    pub trials: Option<u64>,
    /// Lemmas to fuzz, comma separated; all by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub lemma: Vec<LemmaArg>,
}

/// `disk:R`, `circle:L` or `annulus:A,B`.
pub fn parse_analytic(spec: &str) -> LabResult<AnalyticDomain> {
    let bad = || LabError::Usage(format!("expected disk:R, circle:L or annulus:A,B, got \"{spec}\""));
    let (kind, args) = spec.split_once(':').ok_or_else(bad)?;
    let nums: Vec<f64> = args
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let domain = match (kind, nums.as_slice()) {
        ("disk", [r]) => AnalyticDomain::Disk { radius: *r },
        ("circle", [l]) => AnalyticDomain::Circle { length: *l },
        ("annulus", [a, b]) => AnalyticDomain::Annulus {
            r_inner: *a,
            r_outer: *b,
        },
        _ => return Err(bad()),
    };
    domain.validate()?;
    Ok(domain)
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> LabResult<i32> {
    let file = cli.global.config.as_deref().map(FileConfig::load).transpose()?;
    let (count, trials) = match &cli.command {
        Command::Spectrum(a) => (a.count, None),
        Command::Convergence(a) => (a.count, None),
        Command::Lemmas(a) => (None, a.trials),
        _ => (None, None),
    };
    let g = &cli.global;
    let flags = Overrides {
        seed: g.seed,
        tolerance: g.tolerance,
        out: g.out.clone(),
        format: g.format,
        levels: g.levels.clone(),
        refinement: g.refinement,
        count,
        trials,
        no_timestamp: g.no_timestamp,
    };
    let cfg = RunConfig::resolve(flags, file)?;
    match &cli.command {
        Command::Mesh(a) => commands::cmd_mesh(&cfg, a),
        Command::Spectrum(a) => commands::cmd_spectrum(&cfg, a),
        Command::Verify(a) => commands::cmd_verify(&cfg, a),
        Command::Convergence(a) => commands::cmd_convergence(&cfg, a),
        Command::Lemmas(a) => commands::cmd_lemmas(&cfg, a),
    }
}
