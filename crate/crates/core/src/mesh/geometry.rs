use serde::{Deserialize, Serialize};

use super::{MeshError, TriMesh2D};

/// Per-triangle geometric constants.
///
/// Edge `e_i` is opposite vertex `a_i`; `angles[i]` is the interior angle at
/// `a_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementGeometry {
    pub area: f64,
    pub edge_lengths: [f64; 3],
    pub angles: [f64; 3],
    /// Smallest cosine of the three angles.
    pub c_t: f64,
    /// Largest sine of the three angles.
    pub s_t: f64,
    /// Smallest ratio of sines, `min sin / max sin`.
    pub r_t: f64,
}

impl ElementGeometry {
    pub fn max_angle(&self) -> f64 {
        self.angles.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min_angle(&self) -> f64 {
        self.angles.iter().copied().fold(f64::MAX, f64::min)
    }

    /// Smallest cotangent over the three angles.
    pub fn min_cot(&self) -> f64 {
        self.angles
            .iter()
            .map(|t| t.cos() / t.sin())
            .fold(f64::INFINITY, f64::min)
    }
}

fn angle_between(u: [f64; 2], v: [f64; 2]) -> f64 {
    let nu = u[0].hypot(u[1]);
    let nv = v[0].hypot(v[1]);
    ((u[0] * v[0] + u[1] * v[1]) / (nu * nv)).clamp(-1.0, 1.0).acos()
}

/// Geometry of a triangle given by its vertex coordinates.
pub fn triangle_geometry(p: [[f64; 2]; 3]) -> ElementGeometry {
    let sub = |a: [f64; 2], b: [f64; 2]| [a[0] - b[0], a[1] - b[1]];
    let mut angles = [0.0; 3];
    let mut edge_lengths = [0.0; 3];
    for i in 0..3 {
        let (a, b, c) = (p[i], p[(i + 1) % 3], p[(i + 2) % 3]);
        angles[i] = angle_between(sub(b, a), sub(c, a));
        let e = sub(c, b);
        edge_lengths[i] = e[0].hypot(e[1]);
    }
    let area = 0.5
        * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]));
    let sines = angles.map(f64::sin);
    let c_t = angles.iter().map(|t| t.cos()).fold(f64::INFINITY, f64::min);
    let s_max = sines.iter().copied().fold(0.0, f64::max);
    let s_min = sines.iter().copied().fold(f64::INFINITY, f64::min);
    ElementGeometry {
        area,
        edge_lengths,
        angles,
        c_t,
        s_t: s_max,
        r_t: s_min / s_max,
    }
}

pub fn element_geometry(mesh: &TriMesh2D, elem: usize) -> Result<ElementGeometry, MeshError> {
    if elem >= mesh.triangles().len() {
        return Err(MeshError::InvalidElement(elem));
    }
    Ok(triangle_geometry(mesh.triangle_coords(elem)))
}
