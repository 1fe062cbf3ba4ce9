use serde::Serialize;

use crate::fem::linalg::is_positive_definite;
use crate::fem::CsrMatrix;

/// Result of checking that a matrix is symmetric positive definite with
/// nonpositive off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StieltjesVerdict {
    pub is_stieltjes: bool,
    pub symmetric: bool,
    /// Positive off-diagonal entries as `(row, col, value)`.
    pub offdiag_violations: Vec<(usize, usize, f64)>,
    pub spd: bool,
}

/// Symmetry is structural plus values equal to `1e-12` relative to the
/// largest entry; definiteness comes from a sparse Cholesky factorisation.
pub fn stieltjes_check(a: &CsrMatrix) -> StieltjesVerdict {
    let scale = a.entries().map(|(_, _, v)| v.abs()).fold(0.0, f64::max);
    let symmetric = a
        .entries()
        .all(|(r, c, v)| a.is_stored(c, r) && (v - a.get(c, r)).abs() <= 1e-12 * scale);
    let offdiag_violations: Vec<_> = a
        .entries()
        .filter(|&(r, c, v)| r != c && v > 0.0)
        .collect();
    let spd = symmetric && is_positive_definite(a);
    StieltjesVerdict {
        is_stieltjes: symmetric && spd && offdiag_violations.is_empty(),
        symmetric,
        offdiag_violations,
        spd,
    }
}
