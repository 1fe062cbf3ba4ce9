//! Brute-force evaluation of the comparison argument: test functions,
//! element partitions, sub/supersolution residual checks, per-lemma
//! integrals against their claimed bounds, and a dense inverse check.
//!
//! Nothing here is needed to certify a solution; it exists to check the
//! certificate engine independently.

mod lemmas;
mod pair;

use serde::Serialize;
use thiserror::Error;

pub use lemmas::{abs_integral_bound, lemma_audit, lemma_bound_check, AbsIntegral, LemmaRecord, PositiveVertices};
pub use pair::{comparison_lhs, verify_pair, verify_subsolution, verify_supersolution, PairVerdict, ResidualVerdict};

use crate::fem::{linalg::dense_inverse, CsrMatrix, DiscreteField, FemError};
use crate::mesh::Mesh;

/// Default tolerance for residual sign checks.
pub const PAIR_TOL: f64 = 1e-10;
/// Gauss points for the `t` integral along `z(t) = t u1 + (1 - t) u2`.
pub const T_POINTS: usize = 5;
/// Largest matrix the dense inverse check accepts by default.
pub const DENSE_LIMIT: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("element {element} is not in the sign-change set")]
    NotInTc { element: usize },
    #[error("matrix of dimension {dim} exceeds the dense limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("the lemma checks need a triangle mesh")]
    NeedsTriangles,
    #[error(transparent)]
    Fem(#[from] FemError),
}

/// `v(a) = 1` where `w(a) > 0`, else `0`; always `0` on Dirichlet vertices.
pub fn indicator_test_function(w: &DiscreteField) -> DiscreteField {
    w.map(|_, x| if x > 0.0 { 1.0 } else { 0.0 })
}

/// Elements where the test function is identically one, identically zero,
/// or non-constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementPartition {
    pub t_plus: Vec<usize>,
    pub t_minus: Vec<usize>,
    pub t_c: Vec<usize>,
}

pub fn partition_elements(mesh: &Mesh, w: &DiscreteField) -> ElementPartition {
    let v = indicator_test_function(w);
    let mut p = ElementPartition {
        t_plus: Vec::new(),
        t_minus: Vec::new(),
        t_c: Vec::new(),
    };
    for e in 0..mesh.num_elements() {
        let ones = mesh
            .element_vertices(e)
            .iter()
            .filter(|&&a| v.at(a) == 1.0)
            .count();
        match ones {
            0 => p.t_minus.push(e),
            n if n == mesh.element_vertices(e).len() => p.t_plus.push(e),
            _ => p.t_c.push(e),
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseVerdict {
    pub nonnegative: bool,
    pub min_entry: f64,
    pub dim: usize,
}

/// Dense inverse of `a`; nonnegative when every entry is at least `-1e-10`.
pub fn inverse_nonnegativity(a: &CsrMatrix, limit: usize) -> Result<InverseVerdict, OracleError> {
    if a.dim() > limit {
        return Err(OracleError::TooLarge {
            dim: a.dim(),
            limit,
        });
    }
    let inv = dense_inverse(a)?;
    let min_entry = inv
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(InverseVerdict {
        nonnegative: min_entry >= -1e-10,
        min_entry,
        dim: a.dim(),
    })
}
