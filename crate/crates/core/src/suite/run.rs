use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::eval::*;
use super::{check_length, check_surface, InequalityReport, TheoremParams};
use crate::analytic::AnalyticDomain;
use crate::fem::FemProblem;
use crate::{DomainTopology, Error, Result, Spectrum, SpectrumKind, SpectrumSource};

/// The spectra of one domain. On surfaces the `(n-2)`-form spectrum is the
/// Steklov spectrum itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectraBundle {
    pub steklov: Spectrum,
    pub laplacian: Spectrum,
    pub boundary_length: f64,
}

impl SpectraBundle {
    pub fn analytic(domain: AnalyticDomain, count: usize) -> Result<Self> {
        Ok(SpectraBundle {
            steklov: domain.steklov(count)?,
            laplacian: domain.boundary_laplacian(count)?,
            boundary_length: domain.boundary_length(),
        })
    }

    /// `count` eigenvalues of each kind, capped at the number of boundary
    /// vertices.
    pub fn fem(problem: &FemProblem, count: usize) -> Result<Self> {
        let count = count.min(problem.boundary_vertices().len());
        Ok(SpectraBundle {
            steklov: problem.steklov_spectrum(count)?,
            laplacian: problem.boundary_laplacian_spectrum(count)?,
            boundary_length: problem.mesh().boundary_length(),
        })
    }

    /// Kinds, shared provenance, boundary length and the zero multiplicities
    /// `b0` and `k` against `topo`.
    pub fn check(&self, topo: &DomainTopology) -> Result<()> {
        check_surface(topo)?;
        check_length(self.boundary_length)?;
        if self.steklov.kind() != SpectrumKind::Steklov || self.laplacian.kind() != SpectrumKind::BoundaryLaplacian {
            return Err(Error::Configuration("bundle spectra have the wrong kinds".into()));
        }
        match (self.steklov.source(), self.laplacian.source()) {
            (SpectrumSource::Analytic { domain: a }, SpectrumSource::Analytic { domain: b }) => {
                let (la, lb) = (a.boundary_length(), b.boundary_length());
                let l = self.boundary_length;
                if (la - l).abs() > 1e-12 * l || (lb - l).abs() > 1e-12 * l {
                    return Err(Error::Configuration(format!(
                        "boundary lengths disagree: {la}, {lb} and {l}"
                    )));
                }
            }
            (SpectrumSource::Fem { mesh_id: a, .. }, SpectrumSource::Fem { mesh_id: b, .. }) if a == b => {}
            _ => {
                return Err(Error::Configuration("Steklov and Laplacian spectra come from different domains".into()));
            }
        }
        for s in [&self.steklov, &self.laplacian] {
            if s.source().boundary_components() != topo.boundary_components {
                return Err(Error::Configuration(format!(
                    "{:?} spectrum has {} boundary components, topology claims {}",
                    s.kind(),
                    s.source().boundary_components(),
                    topo.boundary_components
                )));
            }
        }
        check_zeros(&self.steklov, topo.b0)?;
        check_zeros(&self.laplacian, topo.boundary_components)
    }
}

/// The first `zeros` values vanish and the next one, if present, does not.
fn check_zeros(s: &Spectrum, zeros: usize) -> Result<()> {
    let scale = s.values().last().copied().unwrap_or(0.0).max(1.0);
    let floor = 1e-8 * scale;
    let vanishing = s.values().iter().take_while(|v| **v <= floor).count();
    if vanishing != zeros.min(s.len()) {
        return Err(Error::Configuration(format!(
            "{:?} spectrum has {vanishing} zero eigenvalues, topology implies {zeros}",
            s.kind()
        )));
    }
    Ok(())
}

/// One grid point. Genus and boundary count for `gp` and `k` come from the
/// topology passed to [`run_all`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "inequality", rename_all = "kebab-case")]
pub enum GridEntry {
    Thm1 { params: TheoremParams },
    Thm2 { params: TheoremParams },
    Yy { p: usize, q: usize },
    Hps { p: usize, q: usize },
    Gp { p: usize, q: usize },
    K { p: usize, q: usize },
    HpsTrace { n: usize },
    Majorized { n: usize },
    InverseTrace2 { n: usize },
    PowerQ {
        q: f64,
        r: usize,
        s: usize,
        m: usize,
        #[serde(default)]
        reading: PowerQReading,
    },
    Cor1 {
        n: usize,
        #[serde(default)]
        limit: bool,
    },
    Cor2 { n: usize },
    ProbeOpen {
        n: usize,
        #[serde(default)]
        reading: ProbeReading,
    },
}

impl GridEntry {
    pub fn evaluate(&self, bundle: &SpectraBundle, topo: &DomainTopology) -> Result<InequalityReport> {
        let (sigma, lambda, length) = (&bundle.steklov, &bundle.laplacian, bundle.boundary_length);
        match *self {
            GridEntry::Thm1 { ref params } => eval_thm1(sigma, sigma, lambda, params, topo),
            GridEntry::Thm2 { ref params } => eval_thm2(sigma, sigma, lambda, params, topo),
            GridEntry::Yy { p, q } => eval_yy(sigma, sigma, lambda, p, q, topo),
            GridEntry::Hps { p, q } => eval_hps(sigma, length, p, q),
            GridEntry::Gp { p, q } => eval_gp(sigma, length, topo.genus, topo.boundary_components, p, q),
            GridEntry::K { p, q } => eval_k(sigma, length, topo.genus, topo.boundary_components, p, q),
            GridEntry::HpsTrace { n } => eval_hps_trace(sigma, length, n),
            GridEntry::Majorized { n } => eval_majorized_report(sigma, length, n),
            GridEntry::InverseTrace2 { n } => eval_inverse_trace_2(sigma, length, n),
            GridEntry::PowerQ { q, r, s, m, reading } => {
                eval_power_q(sigma, sigma, lambda, q, (r, s, m), topo, reading)
            }
            GridEntry::Cor1 { n, limit } => eval_cor1(sigma, length, n, limit),
            GridEntry::Cor2 { n } => eval_cor2(sigma, length, n),
            GridEntry::ProbeOpen { n, reading } => probe_open_question(sigma, length, n, reading),
        }
    }
}

/// Evaluates `grid` in order. The bundle is checked against `topo` first.
pub fn run_all(bundle: &SpectraBundle, grid: &[GridEntry], topo: &DomainTopology) -> Result<Vec<InequalityReport>> {
    bundle.check(topo)?;
    grid.iter().map(|e| e.evaluate(bundle, topo)).collect()
}

/// The standard grid. Inequalities stated for simply connected domains are
/// included only when `topo` is simply connected.
pub fn default_grid(topo: &DomainTopology) -> Result<Vec<GridEntry>> {
    let thm1 = |r, s, m, p, q| TheoremParams::new(r, s, m, p, q).map(|params| GridEntry::Thm1 { params });
    let thm2 = |r, s, m, p, q, k, mu| {
        TheoremParams::new(r, s, m, p, q).map(|tp| GridEntry::Thm2 {
            params: tp.with_k_mu(k, mu),
        })
    };
    let mut grid = vec![
        thm1(1, 1, 1, 1.0, 2.0)?,
        thm1(1, 1, 2, 1.0, 2.0)?,
        thm1(1, 2, 3, 1.5, 3.0)?,
        thm1(2, 1, 2, 2.0, 2.0)?,
        thm2(1, 1, 2, 1.0, 2.0, 2, 0.5)?,
        thm2(1, 1, 3, 1.0, 1.0, 1, 1.0)?,
        thm2(1, 1, 4, 1.0, 2.0, 2, 1.0)?,
        thm2(2, 1, 3, 0.5, 3.0, 2, 2.0)?,
        GridEntry::Yy { p: 1, q: 1 },
        GridEntry::Yy { p: 1, q: 2 },
        GridEntry::Yy { p: 2, q: 2 },
        GridEntry::Yy { p: 3, q: 2 },
        GridEntry::PowerQ {
            q: 2.0,
            r: 1,
            s: 1,
            m: 2,
            reading: PowerQReading::SBased,
        },
        GridEntry::PowerQ {
            q: 3.0,
            r: 1,
            s: 1,
            m: 4,
            reading: PowerQReading::SBased,
        },
    ];
    for (p, q) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
        grid.push(GridEntry::Gp { p, q });
        grid.push(GridEntry::K { p, q });
    }
    if topo.is_simply_connected() {
        for (p, q) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            grid.push(GridEntry::Hps { p, q });
        }
        for n in 1..=3 {
            grid.push(GridEntry::HpsTrace { n });
            grid.push(GridEntry::InverseTrace2 { n });
            grid.push(GridEntry::Cor1 { n, limit: false });
            grid.push(GridEntry::Cor2 { n });
        }
        grid.push(GridEntry::Majorized { n: 3 });
        grid.push(GridEntry::Cor1 { n: 3, limit: true });
        for n in 1..=2 {
            grid.push(GridEntry::ProbeOpen {
                n,
                reading: ProbeReading::Literal,
            });
            grid.push(GridEntry::ProbeOpen {
                n,
                reading: ProbeReading::Paired,
            });
        }
    }
    Ok(grid)
}

/// Aggregate counts; informational reports are excluded from `failed`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub sharp: usize,
    pub informational: usize,
}

impl Summary {
    pub fn of(reports: &[InequalityReport]) -> Self {
        let mut s = Summary {
            total: reports.len(),
            ..Default::default()
        };
        for r in reports {
            if r.informational {
                s.informational += 1;
            } else if r.pass {
                s.passed += 1;
            } else {
                s.failed += 1;
            }
            if r.sharp {
                s.sharp += 1;
            }
        }
        s
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}
