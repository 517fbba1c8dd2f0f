//! Mesh files: a JSON object with `format`, `schema_version`, `vertices` and
//! `triangles`. Boundary loops are always re-derived on load.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use steklov_core::mesh::Point;
use steklov_core::TriMesh;

use crate::json::sig17;
use crate::{LabError, LabResult};

pub const MESH_FORMAT: &str = "steklov-mesh";
pub const MESH_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    format: String,
    schema_version: u32,
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
}

/// One vertex or triangle per line.
pub fn mesh_to_string(mesh: &TriMesh) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    let _ = writeln!(s, "  \"format\": \"{MESH_FORMAT}\",");
    let _ = writeln!(s, "  \"schema_version\": {MESH_SCHEMA_VERSION},");
    s.push_str("  \"vertices\": [\n");
    let nv = mesh.vertices().len();
    for (i, p) in mesh.vertices().iter().enumerate() {
        let sep = if i + 1 < nv { "," } else { "" };
        let _ = writeln!(s, "    [{}, {}]{sep}", sig17(p[0]), sig17(p[1]));
    }
    s.push_str("  ],\n  \"triangles\": [\n");
    let nt = mesh.triangles().len();
    for (i, t) in mesh.triangles().iter().enumerate() {
        let sep = if i + 1 < nt { "," } else { "" };
        let _ = writeln!(s, "    [{}, {}, {}]{sep}", t[0], t[1], t[2]);
    }
    s.push_str("  ]\n}\n");
    s
}

/// Parses a mesh file. `origin` names the source in diagnostics.
pub fn mesh_from_str(text: &str, origin: &str) -> LabResult<TriMesh> {
    let parse_error = |line, column, message: String| LabError::Parse {
        origin: origin.to_string(),
        line,
        column,
        message,
    };
    let file: MeshFile =
        serde_json::from_str(text).map_err(|e| parse_error(Some(e.line()), Some(e.column()), e.to_string()))?;
    if file.format != MESH_FORMAT {
        return Err(parse_error(
            None,
            None,
            format!("field format: expected \"{MESH_FORMAT}\", found \"{}\"", file.format),
        ));
    }
    if file.schema_version != MESH_SCHEMA_VERSION {
        return Err(parse_error(
            None,
            None,
            format!("field schema_version: unsupported version {}", file.schema_version),
        ));
    }
    TriMesh::new(file.vertices, file.triangles).map_err(|e| {
        let message = e.to_string();
        let (line, column) = element_reference(&message)
            .and_then(|(field, index)| locate_element(text, field, index))
            .unzip();
        parse_error(line, column, message)
    })
}

/// `("triangles", 17)` from a message mentioning `triangles[17]`.
fn element_reference(message: &str) -> Option<(&'static str, usize)> {
    for field in ["triangles", "vertices"] {
        let key = format!("{field}[");
        if let Some(start) = message.find(&key) {
            let rest = &message[start + key.len()..];
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            return digits.parse().ok().map(|i| (field, i));
        }
    }
    None
}

/// Line and column (1-based) where element `index` of the array under key
/// `field` begins.
fn locate_element(text: &str, field: &str, index: usize) -> Option<(usize, usize)> {
    let key = format!("\"{field}\"");
    let start = text.find(&key)? + key.len();
    let open = start + text[start..].find('[')?;
    let mut depth = 0usize;
    let mut seen = 0usize;
    let mut expecting = true;
    for (offset, ch) in text[open + 1..].char_indices() {
        let at = open + 1 + offset;
        match ch {
            '[' => {
                if depth == 0 && expecting {
                    if seen == index {
                        return Some(line_column(text, at));
                    }
                    seen += 1;
                    expecting = false;
                }
                depth += 1;
            }
            ']' if depth == 0 => return None,
            ']' => depth -= 1,
            ',' if depth == 0 => expecting = true,
            _ => {}
        }
    }
    None
}

fn line_column(text: &str, at: usize) -> (usize, usize) {
    let before = &text[..at];
    let line = before.matches('\n').count() + 1;
    let column = at - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

pub fn load_mesh(path: &Path) -> LabResult<TriMesh> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    mesh_from_str(&text, &path.display().to_string())
}

pub fn save_mesh(mesh: &TriMesh, path: &Path) -> LabResult<()> {
    fs::write(path, mesh_to_string(mesh)).map_err(|e| LabError::io(path, e))
}
