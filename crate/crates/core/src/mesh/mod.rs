//! Planar triangle meshes with oriented boundary loops.

mod generate;

pub use generate::{boundary_count, generate, DomainShape, MAX_REFINEMENT};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point = [f64; 2];

/// Genus, boundary-component count and the Betti numbers they induce on a
/// compact orientable surface with boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainTopology {
    pub genus: usize,
    pub boundary_components: usize,
    pub b0: usize,
    pub b1: usize,
    /// Manifold dimension; meshes in this crate are always surfaces.
    #[serde(default = "two")]
    pub dimension: usize,
}

fn two() -> usize {
    2
}

impl DomainTopology {
    pub fn new(genus: usize, boundary_components: usize) -> Result<Self> {
        if boundary_components == 0 {
            return Err(Error::Topology("at least one boundary component is required".into()));
        }
        Ok(DomainTopology {
            genus,
            boundary_components,
            b0: 1,
            b1: 2 * genus + boundary_components - 1,
            dimension: 2,
        })
    }

    /// The disk: `b0 = 1`, `b1 = 0`.
    pub fn simply_connected() -> Self {
        DomainTopology {
            genus: 0,
            boundary_components: 1,
            b0: 1,
            b1: 0,
            dimension: 2,
        }
    }

    pub fn is_simply_connected(&self) -> bool {
        self.b1 == 0
    }

    /// Checks the Betti numbers against genus and boundary count.
    pub fn validate(&self) -> Result<()> {
        let expected = DomainTopology::new(self.genus, self.boundary_components)?;
        if self.b0 != 1 || self.b1 != expected.b1 {
            return Err(Error::Configuration(alloc::format!(
                "Betti numbers (b0={}, b1={}) do not match genus {} with {} boundary components",
                self.b0,
                self.b1,
                self.genus,
                self.boundary_components
            )));
        }
        Ok(())
    }
}

/// Plain vertex/triangle lists, the persisted form of a [`TriMesh`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshData {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
}

/// Validated planar triangulation.
///
/// Triangles are counterclockwise, every edge belongs to one or two
/// triangles, boundary edges close up into loops that keep the domain on
/// their left, and the mesh is edge-connected. Loops are stored outermost
/// first, each starting at its smallest vertex index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeshData", into = "MeshData")]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_loops: Vec<Vec<usize>>,
    edge_count: usize,
}

impl TryFrom<MeshData> for TriMesh {
    type Error = Error;

    fn try_from(data: MeshData) -> Result<Self> {
        TriMesh::new(data.vertices, data.triangles)
    }
}

impl From<TriMesh> for MeshData {
    fn from(mesh: TriMesh) -> Self {
        MeshData {
            vertices: mesh.vertices,
            triangles: mesh.triangles,
        }
    }
}

pub(crate) fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

impl TriMesh {
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Mesh("vertex list is empty".into()));
        }
        if triangles.is_empty() {
            return Err(Error::Mesh("triangle list is empty".into()));
        }
        if let Some(i) = vertices.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::Mesh(alloc::format!("vertices[{i}] has a non-finite coordinate")));
        }
        let nv = vertices.len();
        let (lo, hi) = vertices.iter().fold(
            ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]),
            |(lo, hi), p| ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])]),
        );
        let diam2 = (hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2);
        let min_area = 1e-14 * diam2;

        let mut used = alloc::vec![false; nv];
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= nv {
                    return Err(Error::Mesh(alloc::format!(
                        "triangles[{t}] references vertex {v} but there are only {nv} vertices"
                    )));
                }
                used[v] = true;
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::Mesh(alloc::format!("triangles[{t}] repeats a vertex: {tri:?}")));
            }
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if !(area > min_area) {
                return Err(Error::Mesh(alloc::format!(
                    "triangles[{t}] has nonpositive or negligible signed area {area:e}"
                )));
            }
            for e in 0..3 {
                let key = (tri[e], tri[(e + 1) % 3]);
                if let Some(prev) = directed.insert(key, t) {
                    return Err(Error::Mesh(alloc::format!(
                        "edge {key:?} is used in the same direction by triangles {prev} and {t} \
                         (inconsistent orientation or more than two triangles on an edge)"
                    )));
                }
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::Mesh(alloc::format!("vertices[{v}] belongs to no triangle")));
        }

        let mut edge_count = 0usize;
        let mut next = alloc::vec![usize::MAX; nv];
        let mut incoming = alloc::vec![0u8; nv];
        let mut boundary_edges = 0usize;
        let mut parent: Vec<usize> = (0..triangles.len()).collect();
        for (&(a, b), &t) in &directed {
            match directed.get(&(b, a)) {
                Some(&u) => {
                    if a < b {
                        edge_count += 1;
                        union(&mut parent, t, u);
                    }
                }
                None => {
                    edge_count += 1;
                    boundary_edges += 1;
                    if next[a] != usize::MAX {
                        return Err(Error::Mesh(alloc::format!(
                            "vertex {a} has two outgoing boundary edges (pinched boundary)"
                        )));
                    }
                    next[a] = b;
                    incoming[b] += 1;
                }
            }
        }
        if boundary_edges == 0 {
            return Err(Error::Mesh("mesh has no boundary".into()));
        }
        if let Some(v) = (0..nv).find(|&v| (next[v] != usize::MAX) != (incoming[v] == 1) || incoming[v] > 1) {
            return Err(Error::Mesh(alloc::format!(
                "boundary edges at vertex {v} do not form a simple closed cycle"
            )));
        }
        let root = find(&mut parent, 0);
        if let Some(t) = (0..triangles.len()).find(|&t| find(&mut parent, t) != root) {
            return Err(Error::Mesh(alloc::format!(
                "mesh is not edge-connected: triangles[{t}] is in a separate component"
            )));
        }

        let mut seen = alloc::vec![false; nv];
        let mut loops: Vec<Vec<usize>> = Vec::new();
        for start in 0..nv {
            if next[start] == usize::MAX || seen[start] {
                continue;
            }
            // `start` is the smallest index on its loop because we scan upwards
            let mut lp = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                lp.push(v);
                v = next[v];
            }
            if v != start {
                return Err(Error::Internal("boundary walk did not close".into()));
            }
            if lp.len() < 3 {
                return Err(Error::Mesh(alloc::format!(
                    "boundary loop through vertex {start} has only {} vertices",
                    lp.len()
                )));
            }
            loops.push(lp);
        }
        let areas: Vec<f64> = loops.iter().map(|l| polygon_area(&vertices, l)).collect();
        let mut order: Vec<usize> = (0..loops.len()).collect();
        order.sort_by(|&i, &j| areas[j].total_cmp(&areas[i]).then(loops[i][0].cmp(&loops[j][0])));
        let boundary_loops = order.into_iter().map(|i| core::mem::take(&mut loops[i])).collect();

        Ok(TriMesh {
            vertices,
            triangles,
            boundary_loops,
            edge_count,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_loops(&self) -> &[Vec<usize>] {
        &self.boundary_loops
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn boundary_vertex_count(&self) -> usize {
        self.boundary_loops.iter().map(Vec::len).sum()
    }

    /// Boundary vertices, loop by loop in loop order.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        self.boundary_loops.iter().flatten().copied().collect()
    }

    pub fn is_boundary_vertex(&self) -> Vec<bool> {
        let mut flags = alloc::vec![false; self.vertices.len()];
        for &v in self.boundary_loops.iter().flatten() {
            flags[v] = true;
        }
        flags
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count as i64 + self.triangles.len() as i64
    }

    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| signed_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]))
            .sum()
    }

    /// Signed area enclosed by each loop: positive for outer loops, negative
    /// for holes.
    pub fn loop_signed_areas(&self) -> Vec<f64> {
        self.boundary_loops
            .iter()
            .map(|l| polygon_area(&self.vertices, l))
            .collect()
    }

    /// Genus and Betti numbers from `V - E + F = 2 - 2γ - k`.
    pub fn topology(&self) -> Result<DomainTopology> {
        let k = self.boundary_loops.len() as i64;
        let twice_genus = 2 - k - self.euler_characteristic();
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(Error::Topology(alloc::format!(
                "Euler characteristic {} with {k} boundary loops is not an orientable surface",
                self.euler_characteristic()
            )));
        }
        DomainTopology::new((twice_genus / 2) as usize, k as usize)
    }

    /// Perimeter of every boundary loop.
    pub fn loop_lengths(&self) -> Vec<f64> {
        self.boundary_loops
            .iter()
            .map(|l| {
                (0..l.len())
                    .map(|i| dist(self.vertices[l[i]], self.vertices[l[(i + 1) % l.len()]]))
                    .sum()
            })
            .collect()
    }

    /// Total boundary length `L(∂M)`.
    pub fn boundary_length(&self) -> f64 {
        self.loop_lengths().iter().sum()
    }

    /// Stable content hash, printed as 16 hex digits.
    pub fn fingerprint(&self) -> String {
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        eat(self.vertices.len() as u64);
        for p in &self.vertices {
            eat(p[0].to_bits());
            eat(p[1].to_bits());
        }
        eat(self.triangles.len() as u64);
        for t in &self.triangles {
            for &v in t {
                eat(v as u64);
            }
        }
        alloc::format!("{h:016x}")
    }

    /// Same connectivity with every vertex moved by `f`; revalidated.
    pub fn map_vertices(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        TriMesh::new(self.vertices.iter().map(|&p| f(p)).collect(), self.triangles.clone())
    }
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

fn polygon_area(vertices: &[Point], lp: &[usize]) -> f64 {
    let n = lp.len();
    0.5 * (0..n)
        .map(|i| {
            let a = vertices[lp[i]];
            let b = vertices[lp[(i + 1) % n]];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}
