//! The report envelope and its CSV flattening.

use serde::{Deserialize, Serialize};
use steklov_core::ineq::fuzz::FuzzSummary;
use steklov_core::suite::InequalityReport;
use steklov_core::{DomainTopology, Spectrum, SpectrumSource};

use crate::json::sig17;
use crate::LabResult;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "steklov";

/// Counts of a generated mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSummary {
    pub mesh_id: String,
    pub vertices: usize,
    pub triangles: usize,
    pub boundary_vertices: usize,
    pub boundary_loops: usize,
    pub loop_lengths: Vec<f64>,
    pub topology: DomainTopology,
}

/// One quantity at one refinement level. Eigenvalue rows carry a reference
/// and a relative error; inequality rows carry the report's relative slack
/// in `computed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub level: u32,
    pub vertices: usize,
    pub boundary_vertices: usize,
    pub quantity: String,
    pub index: usize,
    pub computed: f64,
    pub reference: Option<f64>,
    pub relative_error: Option<f64>,
    /// Whether the largest error of this quantity shrank from the previous level.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Record {
    Inequality(InequalityReport),
    Spectrum(Spectrum),
    Mesh(MeshSummary),
    Convergence(ConvergenceRow),
    Lemma(FuzzSummary),
}

impl Record {
    /// `None` for informational records.
    pub fn pass(&self) -> Option<bool> {
        match self {
            Record::Inequality(r) if r.informational => None,
            Record::Inequality(r) => Some(r.pass),
            Record::Spectrum(_) | Record::Mesh(_) => Some(true),
            Record::Convergence(r) => Some(r.monotone),
            Record::Lemma(s) => Some(s.pass()),
        }
    }

    fn sharp(&self) -> bool {
        matches!(self, Record::Inequality(r) if r.sharp)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub sharp: usize,
    pub informational: usize,
}

impl EnvelopeSummary {
    pub fn of(records: &[Record]) -> Self {
        let mut s = EnvelopeSummary {
            total: records.len(),
            ..Default::default()
        };
        for r in records {
            match r.pass() {
                None => s.informational += 1,
                Some(true) => s.passed += 1,
                Some(false) => s.failed += 1,
            }
            s.sharp += r.sharp() as usize;
        }
        s
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    /// RFC 3339; omitted under `--no-timestamp`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub command: String,
    pub config: serde_json::Value,
    pub summary: EnvelopeSummary,
    pub records: Vec<Record>,
}

impl ReportEnvelope {
    pub fn new(command: &str, config: serde_json::Value, records: Vec<Record>, timestamp: bool) -> Self {
        ReportEnvelope {
            schema_version: SCHEMA_VERSION,
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: timestamp.then(|| chrono::Utc::now().to_rfc3339()),
            command: command.into(),
            config,
            summary: EnvelopeSummary::of(&records),
            records,
        }
    }

    pub fn to_json(&self) -> LabResult<String> {
        crate::json::to_string(self)
    }

    /// One row per record; a new header starts whenever the record type
    /// changes, separated by a blank line.
    pub fn to_csv(&self) -> LabResult<String> {
        let mut out = String::new();
        let mut current: Option<&'static [&'static str]> = None;
        let mut writer: Option<csv::Writer<Vec<u8>>> = None;
        for record in &self.records {
            let header = csv_header(record);
            if current != Some(header) {
                if let Some(w) = writer.take() {
                    out.push_str(&finish(w)?);
                    out.push('\n');
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(header)?;
                writer = Some(w);
                current = Some(header);
            }
            if let Some(w) = writer.as_mut() {
                for row in csv_rows(record) {
                    w.write_record(row)?;
                }
            }
        }
        if let Some(w) = writer {
            out.push_str(&finish(w)?);
        }
        Ok(out)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> LabResult<String> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

pub const INEQUALITY_COLUMNS: &[&str] = &[
    "record", "name", "relation", "lhs", "rhs", "slack", "relative_slack", "pass", "sharp", "tolerance",
    "sharpness_tolerance", "informational", "r", "s", "m", "k", "n", "p", "q", "q_star", "mu", "length", "limit",
    "reading", "genus", "boundary_components", "sources",
];
pub const SPECTRUM_COLUMNS: &[&str] = &["record", "kind", "index", "value", "tolerance", "source"];
pub const MESH_COLUMNS: &[&str] = &[
    "record", "mesh_id", "vertices", "triangles", "boundary_vertices", "boundary_loops", "genus", "boundary_length",
];
pub const CONVERGENCE_COLUMNS: &[&str] = &[
    "record", "level", "vertices", "boundary_vertices", "quantity", "index", "computed", "reference",
    "relative_error", "monotone",
];
pub const LEMMA_COLUMNS: &[&str] = &["record", "kind", "seed", "trials", "violations", "pass"];

fn csv_header(record: &Record) -> &'static [&'static str] {
    match record {
        Record::Inequality(_) => INEQUALITY_COLUMNS,
        Record::Spectrum(_) => SPECTRUM_COLUMNS,
        Record::Mesh(_) => MESH_COLUMNS,
        Record::Convergence(_) => CONVERGENCE_COLUMNS,
        Record::Lemma(_) => LEMMA_COLUMNS,
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_f(v: Option<f64>) -> String {
    v.map(sig17).unwrap_or_default()
}

pub fn source_label(s: &SpectrumSource) -> String {
    match s {
        SpectrumSource::Analytic { domain } => {
            let v = serde_json::to_value(domain).unwrap_or_default();
            let kind = v.get("domain").and_then(|d| d.as_str()).unwrap_or("analytic").to_string();
            let args: Vec<String> = v
                .as_object()
                .into_iter()
                .flatten()
                .filter(|(k, _)| k.as_str() != "domain")
                .filter_map(|(_, x)| x.as_f64().map(sig17))
                .collect();
            format!("analytic:{kind}:{}", args.join(","))
        }
        SpectrumSource::Fem { mesh_id, refinement, .. } => match refinement {
            Some(r) => format!("fem:{mesh_id}:{r}"),
            None => format!("fem:{mesh_id}"),
        },
    }
}

/// Spectra flatten to one row per eigenvalue; everything else to one row.
fn csv_rows(record: &Record) -> Vec<Vec<String>> {
    match record {
        Record::Inequality(r) => {
            let p = &r.params;
            let relation = match r.relation {
                steklov_core::ineq::Direction::LessEq => "<=",
                steklov_core::ineq::Direction::GreaterEq => ">=",
            };
            vec![vec![
                "inequality".into(),
                r.name.clone(),
                relation.into(),
                sig17(r.lhs),
                sig17(r.rhs),
                sig17(r.slack),
                sig17(r.relative_slack),
                r.pass.to_string(),
                r.sharp.to_string(),
                sig17(r.tolerance),
                sig17(r.sharpness_tolerance),
                r.informational.to_string(),
                opt(p.r),
                opt(p.s),
                opt(p.m),
                opt(p.k),
                opt(p.n),
                opt_f(p.p),
                opt_f(p.q),
                opt_f(p.q_star),
                opt_f(p.mu),
                opt_f(p.length),
                opt(p.limit),
                p.reading.clone().unwrap_or_default(),
                opt(p.topology.map(|t| t.genus)),
                opt(p.topology.map(|t| t.boundary_components)),
                r.inputs.iter().map(source_label).collect::<Vec<_>>().join(";"),
            ]]
        }
        Record::Spectrum(s) => {
            let kind = match s.kind() {
                steklov_core::SpectrumKind::Steklov => "steklov",
                steklov_core::SpectrumKind::BoundaryLaplacian => "boundary-laplacian",
            };
            s.values()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    vec![
                        "spectrum".into(),
                        kind.into(),
                        (i + 1).to_string(),
                        sig17(*v),
                        sig17(s.tolerance()),
                        source_label(s.source()),
                    ]
                })
                .collect()
        }
        Record::Mesh(m) => vec![vec![
            "mesh".into(),
            m.mesh_id.clone(),
            m.vertices.to_string(),
            m.triangles.to_string(),
            m.boundary_vertices.to_string(),
            m.boundary_loops.to_string(),
            m.topology.genus.to_string(),
            sig17(m.loop_lengths.iter().sum()),
        ]],
        Record::Convergence(c) => vec![vec![
            "convergence".into(),
            c.level.to_string(),
            c.vertices.to_string(),
            c.boundary_vertices.to_string(),
            c.quantity.clone(),
            c.index.to_string(),
            sig17(c.computed),
            opt_f(c.reference),
            opt_f(c.relative_error),
            c.monotone.to_string(),
        ]],
        Record::Lemma(s) => vec![vec![
            "lemma".into(),
            s.kind.name().into(),
            s.seed.to_string(),
            s.trials.to_string(),
            s.violations.to_string(),
            s.pass().to_string(),
        ]],
    }
}
