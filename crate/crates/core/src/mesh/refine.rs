use std::collections::HashMap;

use super::{build_interval_mesh, BoundaryEdge, Mesh, Mesh1D, TriMesh2D};

/// Records, for each vertex of a refined mesh, the coarse vertices whose
/// midpoint it is. Coarse vertices map to themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementMap {
    pub parents: Vec<[usize; 2]>,
}

impl RefinementMap {
    /// Linear interpolation of coarse nodal values onto the refined mesh.
    pub fn prolongate(&self, coarse: &[f64]) -> Vec<f64> {
        self.parents
            .iter()
            .map(|&[a, b]| 0.5 * (coarse[a] + coarse[b]))
            .collect()
    }
}

fn refine_interval(m: &Mesh1D) -> (Mesh1D, RefinementMap) {
    let n = m.nodes().len();
    let mut nodes = Vec::with_capacity(2 * n - 1);
    let mut parents = Vec::with_capacity(2 * n - 1);
    for k in 0..n {
        if k > 0 {
            nodes.push(0.5 * (m.nodes()[k - 1] + m.nodes()[k]));
            parents.push([k - 1, k]);
        }
        nodes.push(m.nodes()[k]);
        parents.push([k, k]);
    }
    let mesh = build_interval_mesh(nodes, m.left(), m.right())
        .expect("halving a valid interval mesh keeps it valid");
    (mesh, RefinementMap { parents })
}

fn refine_triangles(m: &TriMesh2D) -> (TriMesh2D, RefinementMap) {
    let mut vertices = m.vertices().to_vec();
    let mut parents: Vec<[usize; 2]> = (0..vertices.len()).map(|i| [i, i]).collect();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
        let key = if a < b { (a, b) } else { (b, a) };
        *midpoint.entry(key).or_insert_with(|| {
            let (p, q) = (vertices[a], vertices[b]);
            vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
            parents.push([key.0, key.1]);
            vertices.len() - 1
        })
    };
    let mut triangles = Vec::with_capacity(4 * m.triangles().len());
    for &[a1, a2, a3] in m.triangles() {
        let m1 = mid(a2, a3, &mut vertices);
        let m2 = mid(a3, a1, &mut vertices);
        let m3 = mid(a1, a2, &mut vertices);
        triangles.push([a1, m3, m2]);
        triangles.push([m3, a2, m1]);
        triangles.push([m2, m1, a3]);
        triangles.push([m1, m2, m3]);
    }
    let mut boundary = Vec::with_capacity(2 * m.boundary().len());
    for b in m.boundary() {
        let [p, q] = b.vertices;
        let c = mid(p, q, &mut vertices);
        for vertices in [[p, c], [c, q]] {
            boundary.push(BoundaryEdge {
                vertices,
                marker: b.marker,
                psi: b.psi,
            });
        }
    }
    let mesh = TriMesh2D::new(vertices, triangles, boundary)
        .expect("red refinement of a valid mesh is valid");
    (mesh, RefinementMap { parents })
}

/// Uniform refinement together with the vertex parent map.
///
/// 1D: every interval is halved. 2D: red refinement, each triangle split
/// into four similar children through its edge midpoints. Boundary markers
/// and Neumann data are inherited.
pub fn refine_uniform_mapped(mesh: &Mesh) -> (Mesh, RefinementMap) {
    match mesh {
        Mesh::Interval(m) => {
            let (m, map) = refine_interval(m);
            (Mesh::Interval(m), map)
        }
        Mesh::Triangle(m) => {
            let (m, map) = refine_triangles(m);
            (Mesh::Triangle(m), map)
        }
    }
}

pub fn refine_uniform(mesh: &Mesh) -> Mesh {
    refine_uniform_mapped(mesh).0
}
