//! Direct solvers backed by `faer`.

use faer::linalg::solvers::DenseSolveCore;
use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use faer::Side;

use super::{CsrMatrix, FemError};

/// Relative pivot size below which a dense factorisation counts as singular.
const PIVOT_RATIO: f64 = 1e-14;

fn to_faer(a: &CsrMatrix) -> Result<SparseColMat<usize, f64>, FemError> {
    let t: Vec<_> = a.entries().map(|(r, c, v)| Triplet::new(r, c, v)).collect();
    SparseColMat::try_new_from_triplets(a.dim(), a.dim(), &t)
        .map_err(|e| FemError::Singular(format!("{e:?}")))
}

/// Solves `a x = b` with a sparse LU factorisation.
///
/// Fails when the factorisation breaks down or the solution is not finite or
/// does not reproduce `b` to a relative residual of `1e-8`.
pub fn solve_sparse(a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>, FemError> {
    let n = a.dim();
    assert_eq!(b.len(), n);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lu = to_faer(a)?
        .sp_lu()
        .map_err(|e| FemError::Singular(format!("{e:?}")))?;
    let rhs = Col::from_fn(n, |i| b[i]);
    let sol = lu.solve(&rhs);
    let x: Vec<f64> = (0..n).map(|i| sol[i]).collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(FemError::Singular("non-finite solution".into()));
    }
    let r = a.matvec(&x);
    let res = r.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    let scale = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let amax = a.entries().map(|(_, _, v)| v.abs()).fold(0.0, f64::max);
    let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if res > 1e-8 * (scale + amax * xnorm) {
        return Err(FemError::Singular(format!("residual {res:e} after solve")));
    }
    Ok(x)
}

/// Whether a sparse Cholesky factorisation of `a` succeeds. The lower
/// triangle is read; callers check symmetry separately.
pub fn is_positive_definite(a: &CsrMatrix) -> bool {
    if a.dim() == 0 {
        return true;
    }
    match to_faer(a) {
        Ok(m) => m.sp_cholesky(Side::Lower).is_ok(),
        Err(_) => false,
    }
}

/// Dense inverse via full-pivot LU; rows of the result are rows of `a^-1`.
pub fn dense_inverse(a: &CsrMatrix) -> Result<Vec<Vec<f64>>, FemError> {
    let n = a.dim();
    let d = a.to_dense();
    let m = Mat::from_fn(n, n, |i, j| d[i][j]);
    let lu = m.full_piv_lu();
    let u = lu.U();
    let diag: Vec<f64> = (0..n).map(|i| u[(i, i)].abs()).collect();
    let big = diag.iter().copied().fold(0.0, f64::max);
    if n > 0 && diag.iter().any(|&p| !(p > PIVOT_RATIO * big)) {
        return Err(FemError::Singular("matrix is numerically singular".into()));
    }
    let inv = lu.inverse();
    Ok((0..n).map(|i| (0..n).map(|j| inv[(i, j)]).collect()).collect())
}
