use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{triangle_geometry, Mesh, TriMesh2D};

/// Angle extremes over a triangulation and the acuteness verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalMeshQuality {
    pub t_min: f64,
    pub t_max: f64,
    pub s_min: f64,
    pub c_min: f64,
    /// `t_max < pi/2` and `t_min > 0`, both strict.
    pub acute: bool,
    /// Elements attaining `t_min` or `t_max`, ascending.
    pub worst_elements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dimension")]
pub enum MeshQualityReport {
    /// Interval partitions have no angle condition.
    #[serde(rename = "1")]
    Interval {
        acute: bool,
        elements: usize,
        h_min: f64,
        h_max: f64,
    },
    #[serde(rename = "2")]
    Triangle(GlobalMeshQuality),
}

impl MeshQualityReport {
    pub fn acute(&self) -> bool {
        match self {
            MeshQualityReport::Interval { acute, .. } => *acute,
            MeshQualityReport::Triangle(q) => q.acute,
        }
    }
}

pub fn triangle_mesh_quality(mesh: &TriMesh2D) -> GlobalMeshQuality {
    let mut t_min = f64::INFINITY;
    let mut t_max = f64::NEG_INFINITY;
    let mut per_elem = Vec::with_capacity(mesh.triangles().len());
    for e in 0..mesh.triangles().len() {
        let g = triangle_geometry(mesh.triangle_coords(e));
        let (lo, hi) = (g.min_angle(), g.max_angle());
        t_min = t_min.min(lo);
        t_max = t_max.max(hi);
        per_elem.push((lo, hi));
    }
    let worst_elements = per_elem
        .iter()
        .enumerate()
        .filter(|(_, (lo, hi))| *lo == t_min || *hi == t_max)
        .map(|(e, _)| e)
        .collect();
    GlobalMeshQuality {
        t_min,
        t_max,
        s_min: t_min.sin(),
        c_min: t_max.cos(),
        acute: t_max < FRAC_PI_2 && t_min > 0.0,
        worst_elements,
    }
}

pub fn mesh_quality(mesh: &Mesh) -> MeshQualityReport {
    match mesh {
        Mesh::Interval(m) => {
            let hs: Vec<f64> = (0..m.num_intervals()).map(|k| m.h(k)).collect();
            MeshQualityReport::Interval {
                acute: true,
                elements: hs.len(),
                h_min: hs.iter().copied().fold(f64::INFINITY, f64::min),
                h_max: hs.iter().copied().fold(0.0, f64::max),
            }
        }
        Mesh::Triangle(m) => MeshQualityReport::Triangle(triangle_mesh_quality(m)),
    }
}
