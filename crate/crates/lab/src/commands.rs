//! The five subcommands.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use steklov_core::analytic::AnalyticDomain;
use steklov_core::fem::FemProblem;
use steklov_core::ineq::fuzz::LemmaKind;
use steklov_core::mesh::{generate, DomainShape};
use steklov_core::suite::{
    default_grid, GridEntry, PowerQReading, ProbeReading, SpectraBundle, TheoremParams,
};
use steklov_core::{DomainTopology, Error, Spectrum, SpectrumKind, TriMesh};

use crate::cli::{
    parse_analytic, ConvergenceArgs, InequalityName, LemmasArgs, MeshArgs, ReadingArg, SourceArgs, SpectrumArgs,
    VerifyArgs,
};
use crate::config::RunConfig;
use crate::error::{EXIT_PASS, EXIT_VIOLATION};
use crate::mesh_io::{load_mesh, mesh_to_string};
use crate::report::{ConvergenceRow, MeshSummary, Record, ReportEnvelope};
use crate::{parallel, LabError, LabResult};

/// Eigenvalues requested from closed-form sources.
const ANALYTIC_COUNT: usize = 400;

fn write_output(cfg: &RunConfig, name: &str, extension: &str, text: &str) -> LabResult<Option<std::path::PathBuf>> {
    match cfg.destination(name, extension) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
            }
            fs::write(&path, text).map_err(|e| LabError::io(&path, e))?;
            Ok(Some(path))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| LabError::io("<stdout>", e))?;
            Ok(None)
        }
    }
}

fn emit<A: Serialize>(cfg: &RunConfig, command: &str, args: &A, records: Vec<Record>) -> LabResult<i32> {
    let config = serde_json::json!({ "global": cfg, "args": args });
    let envelope = ReportEnvelope::new(command, config, records, cfg.timestamp);
    let text = match cfg.format {
        crate::config::OutputFormat::Json => envelope.to_json()?,
        crate::config::OutputFormat::Csv => envelope.to_csv()?,
    };
    let path = write_output(cfg, command, cfg.format.extension(), &text)?;
    let s = envelope.summary;
    let target = path.map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
    eprintln!(
        "{command}: {} records, {} passed, {} failed, {} sharp, {} informational -> {target}",
        s.total, s.passed, s.failed, s.sharp, s.informational
    );
    Ok(if s.all_pass() { EXIT_PASS } else { EXIT_VIOLATION })
}

/// Generated mesh, or the mesh file named by a `FromFile` shape.
pub fn build_mesh(shape: &DomainShape, level: u32) -> LabResult<TriMesh> {
    match shape {
        DomainShape::FromFile { path } => load_mesh(Path::new(path)),
        _ => Ok(generate(shape, level)?),
    }
}

pub fn mesh_summary(mesh: &TriMesh) -> LabResult<MeshSummary> {
    Ok(MeshSummary {
        mesh_id: mesh.fingerprint(),
        vertices: mesh.vertex_count(),
        triangles: mesh.triangles().len(),
        boundary_vertices: mesh.boundary_vertex_count(),
        boundary_loops: mesh.boundary_loops().len(),
        loop_lengths: mesh.loop_lengths(),
        topology: mesh.topology()?,
    })
}

pub fn cmd_mesh(cfg: &RunConfig, args: &MeshArgs) -> LabResult<i32> {
    let shape = args
        .shape
        .to_shape()
        .ok_or_else(|| LabError::Usage("mesh needs --shape".into()))?;
    let mesh = build_mesh(&shape, cfg.refinement)?;
    let summary = mesh_summary(&mesh)?;
    let path = write_output(cfg, "mesh", "json", &mesh_to_string(&mesh))?;
    let line = format!(
        "vertices {} triangles {} boundary vertices {} boundary loops {}",
        summary.vertices, summary.triangles, summary.boundary_vertices, summary.boundary_loops
    );
    match path {
        Some(p) => println!("{line} -> {}", p.display()),
        None => eprintln!("{line}"),
    }
    Ok(EXIT_PASS)
}

/// Either closed-form spectra or a finite-element problem.
enum Source {
    Analytic(AnalyticDomain),
    Fem(Box<FemProblem>),
}

fn resolve_source(cfg: &RunConfig, args: &SourceArgs) -> LabResult<Source> {
    if let Some(spec) = &args.analytic {
        return Ok(Source::Analytic(parse_analytic(spec)?));
    }
    if let Some(path) = &args.mesh {
        return Ok(Source::Fem(Box::new(FemProblem::new(&load_mesh(path)?)?)));
    }
    match args.shape.to_shape() {
        Some(shape) => {
            let mesh = build_mesh(&shape, cfg.refinement)?;
            Ok(Source::Fem(Box::new(FemProblem::new(&mesh)?.with_refinement(cfg.refinement))))
        }
        None => Err(LabError::Usage("give one of --analytic, --mesh or --shape".into())),
    }
}

fn mesh_record(source: &Source) -> LabResult<Vec<Record>> {
    match source {
        Source::Analytic(_) => Ok(Vec::new()),
        Source::Fem(p) => Ok(vec![Record::Mesh(mesh_summary(p.mesh())?)]),
    }
}

fn override_tolerance(cfg: &RunConfig, s: Spectrum) -> Spectrum {
    match cfg.tolerance {
        Some(t) => s.with_tolerance(t),
        None => s,
    }
}

pub fn cmd_spectrum(cfg: &RunConfig, args: &SpectrumArgs) -> LabResult<i32> {
    let kind: SpectrumKind = args.kind.into();
    let source = resolve_source(cfg, &args.source)?;
    let mut records = mesh_record(&source)?;
    let spectrum = match &source {
        Source::Analytic(d) => match kind {
            SpectrumKind::Steklov => d.steklov(cfg.count)?,
            SpectrumKind::BoundaryLaplacian => d.boundary_laplacian(cfg.count)?,
        },
        Source::Fem(p) => match kind {
            SpectrumKind::Steklov => p.steklov_spectrum(cfg.count)?,
            SpectrumKind::BoundaryLaplacian => p.boundary_laplacian_spectrum(cfg.count)?,
        },
    };
    records.push(Record::Spectrum(override_tolerance(cfg, spectrum)));
    emit(cfg, "spectrum", args, records)
}

fn bundle_for(cfg: &RunConfig, source: &Source) -> LabResult<(SpectraBundle, DomainTopology)> {
    let (bundle, topo) = match source {
        Source::Analytic(d) => {
            if matches!(d, AnalyticDomain::Circle { .. }) {
                return Err(Error::Unsupported("a circle has no Steklov spectrum; use disk:R".into()).into());
            }
            (SpectraBundle::analytic(*d, ANALYTIC_COUNT)?, d.topology())
        }
        Source::Fem(p) => {
            let count = p.boundary_vertices().len();
            (SpectraBundle::fem(p, count)?, p.mesh().topology()?)
        }
    };
    let bundle = SpectraBundle {
        steklov: override_tolerance(cfg, bundle.steklov),
        laplacian: override_tolerance(cfg, bundle.laplacian),
        ..bundle
    };
    Ok((bundle, topo))
}

fn integer(name: &str, v: Option<f64>, default: usize) -> LabResult<usize> {
    match v {
        None => Ok(default),
        Some(x) if x >= 0.0 && x.fract() == 0.0 && x < 1e9 => Ok(x as usize),
        Some(x) => Err(Error::Parameter(format!("--{name} must be a nonnegative integer here, got {x}")).into()),
    }
}

fn theorem_params(args: &VerifyArgs) -> LabResult<TheoremParams> {
    let m = args.m.unwrap_or(1);
    let mut tp = TheoremParams::new(args.r.unwrap_or(1), args.s.unwrap_or(1), m, args.p.unwrap_or(1.0), args.q.unwrap_or(2.0))?
        .with_k_mu(args.k.unwrap_or(1), args.mu.unwrap_or(1.0));
    if args.a.is_some() || args.c.is_some() {
        let a = args.a.clone().unwrap_or_else(|| vec![1.0; m]);
        let c = args.c.clone().unwrap_or_else(|| vec![1.0; m]);
        tp = tp.with_weights(a, c)?;
    }
    Ok(tp)
}

fn reading_error(reading: ReadingArg, inequality: &str) -> LabError {
    LabError::Usage(format!("reading {reading:?} does not apply to {inequality}"))
}

/// The grid described by the `verify` flags.
pub fn verify_grid(args: &VerifyArgs, topo: &DomainTopology) -> LabResult<Vec<GridEntry>> {
    let n = args.n.unwrap_or(1);
    let pq = || -> LabResult<(usize, usize)> { Ok((integer("p", args.p, 1)?, integer("q", args.q, 1)?)) };
    let entry = match args.inequality {
        InequalityName::All => return Ok(default_grid(topo)?),
        InequalityName::Thm1 => GridEntry::Thm1 {
            params: theorem_params(args)?,
        },
        InequalityName::Thm2 => GridEntry::Thm2 {
            params: theorem_params(args)?,
        },
        InequalityName::Yy => {
            let (p, q) = pq()?;
            GridEntry::Yy { p, q }
        }
        InequalityName::Hps => {
            let (p, q) = pq()?;
            GridEntry::Hps { p, q }
        }
        InequalityName::Gp => {
            let (p, q) = pq()?;
            GridEntry::Gp { p, q }
        }
        InequalityName::K => {
            let (p, q) = pq()?;
            GridEntry::K { p, q }
        }
        InequalityName::HpsTrace => GridEntry::HpsTrace { n },
        InequalityName::Majorized => GridEntry::Majorized { n },
        InequalityName::InverseTrace2 => GridEntry::InverseTrace2 { n },
        InequalityName::PowerQ => GridEntry::PowerQ {
            q: args.q.unwrap_or(2.0),
            r: args.r.unwrap_or(1),
            s: args.s.unwrap_or(1),
            m: args.m.unwrap_or(1),
            reading: match args.reading {
                None | Some(ReadingArg::SBased) => PowerQReading::SBased,
                Some(ReadingArg::RBased) => PowerQReading::RBased,
                Some(r) => return Err(reading_error(r, "power-q")),
            },
        },
        InequalityName::Cor1 => GridEntry::Cor1 { n, limit: args.limit },
        InequalityName::Cor2 => GridEntry::Cor2 { n },
        InequalityName::ProbeOpen => GridEntry::ProbeOpen {
            n,
            reading: match args.reading {
                None | Some(ReadingArg::Literal) => ProbeReading::Literal,
                Some(ReadingArg::Paired) => ProbeReading::Paired,
                Some(r) => return Err(reading_error(r, "probe-open")),
            },
        },
    };
    Ok(vec![entry])
}

pub fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> LabResult<i32> {
    let source = resolve_source(cfg, &args.source)?;
    let (bundle, topo) = bundle_for(cfg, &source)?;
    let grid = verify_grid(args, &topo)?;
    let mut records = mesh_record(&source)?;
    records.extend(parallel::run_grid(&bundle, &grid, &topo)?.into_iter().map(Record::Inequality));
    emit(cfg, "verify", args, records)
}

fn reference_domain(shape: &DomainShape) -> LabResult<AnalyticDomain> {
    match *shape {
        DomainShape::Disk { radius } => Ok(AnalyticDomain::Disk { radius }),
        DomainShape::Annulus { r_inner, r_outer } => Ok(AnalyticDomain::Annulus { r_inner, r_outer }),
        _ => Err(Error::Unsupported("convergence studies need a disk or an annulus, which have closed-form spectra".into()).into()),
    }
}

/// Rows for one level; `monotone` is filled in afterwards.
fn level_rows(shape: &DomainShape, domain: AnalyticDomain, level: u32, count: usize) -> LabResult<Vec<ConvergenceRow>> {
    let mesh = build_mesh(shape, level)?;
    let problem = FemProblem::new(&mesh)?.with_refinement(level);
    let count = count.min(problem.boundary_vertices().len());
    let bundle = SpectraBundle::fem(&problem, count)?;
    let topo = mesh.topology()?;
    let row = |quantity: &str, index, computed, reference: Option<f64>| ConvergenceRow {
        level,
        vertices: mesh.vertex_count(),
        boundary_vertices: mesh.boundary_vertex_count(),
        quantity: quantity.into(),
        index,
        computed,
        reference,
        relative_error: reference.map(|r: f64| (computed - r).abs() / r),
        monotone: true,
    };
    let mut rows = Vec::new();
    for (name, computed, reference) in [
        ("steklov", &bundle.steklov, domain.steklov(count)?),
        ("boundary-laplacian", &bundle.laplacian, domain.boundary_laplacian(count)?),
    ] {
        for (i, (c, r)) in computed.values().iter().zip(reference.values()).enumerate() {
            if *r > 0.0 {
                rows.push(row(name, i + 1, *c, Some(*r)));
            }
        }
    }
    let mut slacks = vec![GridEntry::Yy { p: 1, q: 1 }];
    if topo.is_simply_connected() {
        slacks.push(GridEntry::HpsTrace { n: 1 });
        slacks.push(GridEntry::Cor2 { n: 1 });
    }
    for entry in slacks {
        let report = entry.evaluate(&bundle, &topo)?;
        rows.push(row(&report.name, 0, report.relative_slack, None));
    }
    Ok(rows)
}

fn worst_error(rows: &[ConvergenceRow], level: u32, quantity: &str) -> Option<f64> {
    rows.iter()
        .filter(|r| r.level == level && r.quantity == quantity)
        .filter_map(|r| r.relative_error)
        .reduce(f64::max)
}

/// Marks eigenvalue rows whose level did not improve on the previous level's
/// largest error. Errors below `1e-12` count as converged.
fn mark_monotone(rows: &mut [ConvergenceRow], levels: &[u32]) {
    for w in levels.windows(2) {
        for quantity in ["steklov", "boundary-laplacian"] {
            let (Some(before), Some(after)) = (worst_error(rows, w[0], quantity), worst_error(rows, w[1], quantity))
            else {
                continue;
            };
            if after >= before && after > 1e-12 {
                for r in rows.iter_mut().filter(|r| r.level == w[1] && r.quantity == quantity) {
                    r.monotone = false;
                }
            }
        }
    }
}

pub fn cmd_convergence(cfg: &RunConfig, args: &ConvergenceArgs) -> LabResult<i32> {
    let shape = args
        .shape
        .to_shape()
        .ok_or_else(|| LabError::Usage("convergence needs --shape".into()))?;
    let domain = reference_domain(&shape)?;
    let per_level: Vec<Vec<ConvergenceRow>> = cfg
        .levels
        .par_iter()
        .map(|&level| level_rows(&shape, domain, level, cfg.count))
        .collect::<LabResult<_>>()?;
    let mut rows: Vec<ConvergenceRow> = per_level.into_iter().flatten().collect();
    mark_monotone(&mut rows, &cfg.levels);
    emit(cfg, "convergence", args, rows.into_iter().map(Record::Convergence).collect())
}

pub fn cmd_lemmas(cfg: &RunConfig, args: &LemmasArgs) -> LabResult<i32> {
    let kinds: Vec<LemmaKind> = if args.lemma.is_empty() {
        LemmaKind::ALL.to_vec()
    } else {
        args.lemma.iter().map(|&k| k.into()).collect()
    };
    let summaries = kinds
        .iter()
        .map(|&k| parallel::fuzz(k, cfg.seed, cfg.trials))
        .collect::<LabResult<Vec<_>>>()?;
    emit(cfg, "lemmas", args, summaries.into_iter().map(Record::Lemma).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(level: u32, err: f64) -> ConvergenceRow {
        ConvergenceRow {
            level,
            vertices: 0,
            boundary_vertices: 0,
            quantity: "steklov".into(),
            index: 2,
            computed: 1.0,
            reference: Some(1.0),
            relative_error: Some(err),
            monotone: true,
        }
    }

    #[test]
    fn monotone_marking() {
        let mut rows = vec![row(3, 1e-2), row(4, 5e-3), row(5, 6e-3)];
        mark_monotone(&mut rows, &[3, 4, 5]);
        assert_eq!(rows.iter().map(|r| r.monotone).collect::<Vec<_>>(), [true, true, false]);
        let mut exact = vec![row(3, 1e-15), row(4, 2e-15)];
        mark_monotone(&mut exact, &[3, 4]);
        assert!(exact.iter().all(|r| r.monotone));
    }

    #[test]
    fn integer_parameters() {
        assert_eq!(integer("p", Some(2.0), 1).unwrap(), 2);
        assert_eq!(integer("p", None, 1).unwrap(), 1);
        assert!(integer("p", Some(1.5), 1).is_err());
        assert!(integer("p", Some(-1.0), 1).is_err());
    }
}
