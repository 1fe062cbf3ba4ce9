//! Gradients of the nodal P1 basis functions.

use super::FemError;
use crate::mesh::DEGENERATE_AREA_RATIO;

/// Constant gradients of the three barycentric basis functions of `tri`.
///
/// `element` is only used to label the error.
pub fn basis_gradients(tri: [[f64; 2]; 3], element: usize) -> Result<[[f64; 2]; 3], FemError> {
    let [p0, p1, p2] = tri;
    let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]);
    let scale = [(p0, p1), (p1, p2), (p2, p0)]
        .iter()
        .map(|(p, q)| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2))
        .fold(0.0, f64::max);
    if !(det.abs() > DEGENERATE_AREA_RATIO * scale) {
        return Err(FemError::DegenerateElement { element });
    }
    // grad phi_i is the opposite edge rotated by -90 degrees over 2|T|.
    let g = |a: [f64; 2], b: [f64; 2]| [(a[1] - b[1]) / det, (b[0] - a[0]) / det];
    Ok([g(p1, p2), g(p2, p0), g(p0, p1)])
}

/// Derivatives of the two hat functions on `[a, b]`, embedded as 2-vectors.
pub fn interval_gradients(a: f64, b: f64, element: usize) -> Result<[[f64; 2]; 2], FemError> {
    let h = b - a;
    if !(h > 0.0) {
        return Err(FemError::DegenerateElement { element });
    }
    Ok([[-1.0 / h, 0.0], [1.0 / h, 0.0]])
}
