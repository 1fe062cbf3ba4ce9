//! Interval partitions and conforming triangulations.
//!
//! Meshes are validated on construction and immutable afterwards. Every
//! vertex carries one scalar degree of freedom unless it lies on the
//! Dirichlet part of the boundary.

mod builders;
mod geometry;
mod io;
mod quality;
mod refine;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builders::{equilateral_strip, unit_square_acute, unit_square_acute_refined};
pub use geometry::{element_geometry, triangle_geometry, ElementGeometry};
pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};
pub use quality::{mesh_quality, triangle_mesh_quality, GlobalMeshQuality, MeshQualityReport};
pub use refine::{refine_uniform, refine_uniform_mapped, RefinementMap};

/// Relative area threshold below which a triangle counts as degenerate.
pub const DEGENERATE_AREA_RATIO: f64 = 1e-14;

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("element {element}: degenerate triangle")]
    DegenerateTriangle { element: usize },
    #[error("element {element}: clockwise orientation")]
    Orientation { element: usize },
    #[error("element {element}: vertex index {index} out of range")]
    IndexOutOfRange { element: usize, index: usize },
    #[error("non-conforming mesh: {0}")]
    NonConforming(String),
    #[error("boundary: {0}")]
    Boundary(String),
    #[error("empty Dirichlet boundary")]
    EmptyDirichlet,
    #[error("non-monotone nodes at index {0}")]
    NonMonotone(usize),
    #[error("interval mesh needs at least two nodes")]
    TooFewNodes,
    #[error("vertex {0} is not used by any element")]
    OrphanVertex(usize),
    #[error("element id {0} out of range")]
    InvalidElement(usize),
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryMarker {
    Dirichlet,
    Neumann,
}

/// Boundary condition at one end of an interval mesh. `psi` is the Neumann
/// datum and is ignored on a Dirichlet end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndCondition {
    pub marker: BoundaryMarker,
    pub psi: f64,
}

impl EndCondition {
    pub fn dirichlet() -> Self {
        Self {
            marker: BoundaryMarker::Dirichlet,
            psi: 0.0,
        }
    }

    pub fn neumann(psi: f64) -> Self {
        Self {
            marker: BoundaryMarker::Neumann,
            psi,
        }
    }

    pub fn is_dirichlet(&self) -> bool {
        self.marker == BoundaryMarker::Dirichlet
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh1D {
    nodes: Vec<f64>,
    left: EndCondition,
    right: EndCondition,
}

impl Mesh1D {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn left(&self) -> EndCondition {
        self.left
    }

    pub fn right(&self) -> EndCondition {
        self.right
    }

    pub fn num_intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Length of interval `k` (zero based), i.e. `a_{k+1} - a_k`.
    pub fn h(&self, k: usize) -> f64 {
        self.nodes[k + 1] - self.nodes[k]
    }

    pub fn max_h(&self) -> f64 {
        (0..self.num_intervals()).map(|k| self.h(k)).fold(0.0, f64::max)
    }
}

/// Builds an interval mesh; arbitrary (non-uniform) spacing is accepted.
pub fn build_interval_mesh(
    nodes: Vec<f64>,
    left: EndCondition,
    right: EndCondition,
) -> Result<Mesh1D, MeshError> {
    if nodes.len() < 2 {
        return Err(MeshError::TooFewNodes);
    }
    for (k, pair) in nodes.windows(2).enumerate() {
        if !(pair[1] > pair[0]) || !pair[0].is_finite() || !pair[1].is_finite() {
            return Err(MeshError::NonMonotone(k + 1));
        }
    }
    if !left.is_dirichlet() && !right.is_dirichlet() {
        return Err(MeshError::EmptyDirichlet);
    }
    Ok(Mesh1D { nodes, left, right })
}

/// Uniform interval mesh on `[a, b]` with `n` intervals.
pub fn uniform_interval_mesh(
    a: f64,
    b: f64,
    n: usize,
    left: EndCondition,
    right: EndCondition,
) -> Result<Mesh1D, MeshError> {
    let nodes = (0..=n)
        .map(|k| a + (b - a) * k as f64 / n as f64)
        .collect();
    build_interval_mesh(nodes, left, right)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub marker: BoundaryMarker,
    /// Constant Neumann flux on this edge; ignored when Dirichlet.
    pub psi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriMesh2D {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl TriMesh2D {
    /// Validates and builds a triangulation. Triangles must be
    /// counterclockwise, the mesh conforming, and every boundary edge must
    /// carry exactly one marker.
    pub fn new(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<BoundaryEdge>,
    ) -> Result<Self, MeshError> {
        let nv = vertices.len();
        let mut used = vec![false; nv];
        for (e, tri) in triangles.iter().enumerate() {
            for &i in tri {
                if i >= nv {
                    return Err(MeshError::IndexOutOfRange {
                        element: e,
                        index: i,
                    });
                }
                used[i] = true;
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::DegenerateTriangle { element: e });
            }
            let [p, q, r] = tri.map(|i| vertices[i]);
            let twice_area = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
            let diam2 = [dist2(p, q), dist2(q, r), dist2(r, p)]
                .into_iter()
                .fold(0.0, f64::max);
            if twice_area.abs() / 2.0 <= DEGENERATE_AREA_RATIO * diam2 {
                return Err(MeshError::DegenerateTriangle { element: e });
            }
            if twice_area < 0.0 {
                return Err(MeshError::Orientation { element: e });
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(MeshError::OrphanVertex(i));
        }

        // (min, max) -> (count, directed occurrence)
        let mut edges: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for tri in &triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                edges.entry(edge_key(a, b)).or_default().push((a, b));
            }
        }
        let mut boundary_edges = HashMap::new();
        for (key, uses) in &edges {
            match uses.len() {
                1 => {
                    boundary_edges.insert(*key, false);
                }
                2 => {
                    if uses[0] == uses[1] {
                        return Err(MeshError::NonConforming(format!(
                            "edge {:?} shared by two triangles with the same orientation",
                            key
                        )));
                    }
                }
                n => {
                    return Err(MeshError::NonConforming(format!(
                        "edge {:?} shared by {} triangles",
                        key, n
                    )))
                }
            }
        }
        for (n, be) in boundary.iter().enumerate() {
            let key = edge_key(be.vertices[0], be.vertices[1]);
            match boundary_edges.get_mut(&key) {
                None => {
                    return Err(MeshError::Boundary(format!(
                        "entry {} ({}, {}) is not a boundary edge",
                        n, be.vertices[0], be.vertices[1]
                    )))
                }
                Some(seen) if *seen => {
                    return Err(MeshError::Boundary(format!(
                        "edge ({}, {}) marked twice",
                        be.vertices[0], be.vertices[1]
                    )))
                }
                Some(seen) => *seen = true,
            }
        }
        if let Some((key, _)) = boundary_edges.iter().find(|(_, seen)| !**seen) {
            return Err(MeshError::Boundary(format!(
                "edge ({}, {}) has no marker",
                key.0, key.1
            )));
        }
        // Hanging nodes show up as vertices lying inside a boundary edge.
        for key in boundary_edges.keys() {
            let (p, q) = (vertices[key.0], vertices[key.1]);
            let len2 = dist2(p, q);
            for (i, &x) in vertices.iter().enumerate() {
                if i == key.0 || i == key.1 {
                    continue;
                }
                let t = ((x[0] - p[0]) * (q[0] - p[0]) + (x[1] - p[1]) * (q[1] - p[1])) / len2;
                if t <= 0.0 || t >= 1.0 {
                    continue;
                }
                let proj = [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])];
                if dist2(proj, x) <= 1e-24 * len2 {
                    return Err(MeshError::NonConforming(format!(
                        "vertex {} hangs on edge ({}, {})",
                        i, key.0, key.1
                    )));
                }
            }
        }
        if !boundary
            .iter()
            .any(|b| b.marker == BoundaryMarker::Dirichlet)
        {
            return Err(MeshError::EmptyDirichlet);
        }
        Ok(Self {
            vertices,
            triangles,
            boundary,
        })
    }

    /// Convenience constructor marking every boundary edge with `marker`.
    pub fn with_uniform_boundary(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        marker: BoundaryMarker,
    ) -> Result<Self, MeshError> {
        let boundary = boundary_edges_of(&triangles)
            .into_iter()
            .map(|vertices| BoundaryEdge {
                vertices,
                marker,
                psi: 0.0,
            })
            .collect();
        Self::new(vertices, triangles, boundary)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn triangle_coords(&self, elem: usize) -> [[f64; 2]; 3] {
        self.triangles[elem].map(|i| self.vertices[i])
    }

    /// Returns a copy with the boundary markers remapped by `f`.
    pub fn remark_boundary(
        &self,
        f: impl Fn(&BoundaryEdge, [f64; 2], [f64; 2]) -> (BoundaryMarker, f64),
    ) -> Result<Self, MeshError> {
        let boundary = self
            .boundary
            .iter()
            .map(|b| {
                let (marker, psi) = f(b, self.vertices[b.vertices[0]], self.vertices[b.vertices[1]]);
                BoundaryEdge {
                    vertices: b.vertices,
                    marker,
                    psi,
                }
            })
            .collect();
        Self::new(self.vertices.clone(), self.triangles.clone(), boundary)
    }

    /// Applies `map` to every vertex. The map must preserve orientation.
    pub fn map_vertices(&self, map: impl Fn([f64; 2]) -> [f64; 2]) -> Result<Self, MeshError> {
        Self::new(
            self.vertices.iter().map(|&p| map(p)).collect(),
            self.triangles.clone(),
            self.boundary.clone(),
        )
    }
}

/// Edges used by exactly one triangle, oriented as in that triangle.
pub fn boundary_edges_of(triangles: &[[usize; 3]]) -> Vec<[usize; 2]> {
    let mut count: HashMap<(usize, usize), ([usize; 2], usize)> = HashMap::new();
    for tri in triangles {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            count.entry(edge_key(a, b)).or_insert(([a, b], 0)).1 += 1;
        }
    }
    let mut out: Vec<[usize; 2]> = count
        .into_values()
        .filter(|(_, n)| *n == 1)
        .map(|(e, _)| e)
        .collect();
    out.sort_unstable();
    out
}

pub(crate) fn dist2(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)
}

/// A validated mesh of either dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Mesh {
    Interval(Mesh1D),
    Triangle(TriMesh2D),
}

impl From<Mesh1D> for Mesh {
    fn from(m: Mesh1D) -> Self {
        Mesh::Interval(m)
    }
}

impl From<TriMesh2D> for Mesh {
    fn from(m: TriMesh2D) -> Self {
        Mesh::Triangle(m)
    }
}

/// One Neumann boundary facet: a single end vertex in 1D or an edge in 2D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NeumannFacet {
    Point { vertex: usize, psi: f64 },
    Edge { vertices: [usize; 2], psi: f64 },
}

impl Mesh {
    pub fn dim(&self) -> usize {
        match self {
            Mesh::Interval(_) => 1,
            Mesh::Triangle(_) => 2,
        }
    }

    pub fn num_vertices(&self) -> usize {
        match self {
            Mesh::Interval(m) => m.nodes.len(),
            Mesh::Triangle(m) => m.vertices.len(),
        }
    }

    pub fn num_elements(&self) -> usize {
        match self {
            Mesh::Interval(m) => m.num_intervals(),
            Mesh::Triangle(m) => m.triangles.len(),
        }
    }

    /// Vertex ids of element `e` (two in 1D, three counterclockwise in 2D).
    pub fn element_vertices(&self, e: usize) -> Vec<usize> {
        match self {
            Mesh::Interval(_) => vec![e, e + 1],
            Mesh::Triangle(m) => m.triangles[e].to_vec(),
        }
    }

    /// Vertex coordinate embedded in the plane (1D meshes use `y = 0`).
    pub fn point(&self, v: usize) -> [f64; 2] {
        match self {
            Mesh::Interval(m) => [m.nodes[v], 0.0],
            Mesh::Triangle(m) => m.vertices[v],
        }
    }

    /// Length or area of element `e`.
    pub fn measure(&self, e: usize) -> f64 {
        match self {
            Mesh::Interval(m) => m.h(e),
            Mesh::Triangle(m) => {
                let [p, q, r] = m.triangle_coords(e);
                0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
            }
        }
    }

    pub fn dirichlet_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.num_vertices()];
        match self {
            Mesh::Interval(m) => {
                mask[0] = m.left.is_dirichlet();
                let n = m.nodes.len() - 1;
                mask[n] = m.right.is_dirichlet();
            }
            Mesh::Triangle(m) => {
                for b in &m.boundary {
                    if b.marker == BoundaryMarker::Dirichlet {
                        mask[b.vertices[0]] = true;
                        mask[b.vertices[1]] = true;
                    }
                }
            }
        }
        mask
    }

    pub fn neumann_facets(&self) -> Vec<NeumannFacet> {
        match self {
            Mesh::Interval(m) => {
                let mut out = Vec::new();
                if !m.left.is_dirichlet() {
                    out.push(NeumannFacet::Point {
                        vertex: 0,
                        psi: m.left.psi,
                    });
                }
                if !m.right.is_dirichlet() {
                    out.push(NeumannFacet::Point {
                        vertex: m.nodes.len() - 1,
                        psi: m.right.psi,
                    });
                }
                out
            }
            Mesh::Triangle(m) => m
                .boundary
                .iter()
                .filter(|b| b.marker == BoundaryMarker::Neumann)
                .map(|b| NeumannFacet::Edge {
                    vertices: b.vertices,
                    psi: b.psi,
                })
                .collect(),
        }
    }

    /// Replaces every Neumann datum by `psi`.
    pub fn with_neumann_psi(&self, psi: f64) -> Mesh {
        match self {
            Mesh::Interval(m) => {
                let mut m = m.clone();
                if !m.left.is_dirichlet() {
                    m.left.psi = psi;
                }
                if !m.right.is_dirichlet() {
                    m.right.psi = psi;
                }
                Mesh::Interval(m)
            }
            Mesh::Triangle(m) => {
                let mut m = m.clone();
                for b in &mut m.boundary {
                    if b.marker == BoundaryMarker::Neumann {
                        b.psi = psi;
                    }
                }
                Mesh::Triangle(m)
            }
        }
    }

    pub fn as_interval(&self) -> Option<&Mesh1D> {
        match self {
            Mesh::Interval(m) => Some(m),
            Mesh::Triangle(_) => None,
        }
    }

    pub fn as_triangle(&self) -> Option<&TriMesh2D> {
        match self {
            Mesh::Triangle(m) => Some(m),
            Mesh::Interval(_) => None,
        }
    }
}
