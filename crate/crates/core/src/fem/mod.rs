//! P1 finite elements: quadrature, basis gradients, residual and Jacobian
//! assembly, a damped Newton solver and the semilinear `S + M` system.

mod assembly;
mod basis;
mod field;
pub mod linalg;
mod newton;
mod quadrature;
mod sparse;

use thiserror::Error;

pub use assembly::{
    assemble_jacobian, assemble_residual, assemble_residual_full, assemble_semilinear_system,
    element_jacobian, element_residual, element_semilinear, local_element, LocalElement,
    QuadPoint, SemilinearSystem,
};
pub use basis::{basis_gradients, interval_gradients};
pub use field::{load_field, parse_field, save_field, write_field, DiscreteField};
pub use newton::{solve_newton, IterationRecord, NewtonConfig, SolveResult};
pub use quadrature::{gauss_legendre, interval_rule, triangle_rule, IntervalRule, TriangleRule};
pub use sparse::{CsrMatrix, DofMap, SparseSystem};

use crate::problem::ProblemError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("configuration error: quadrature degree unset")]
    QuadratureUnset,
    #[error("element {element}: degenerate element")]
    DegenerateElement { element: usize },
    #[error("field has {got} values, mesh has {expected} vertices")]
    FieldLength { expected: usize, got: usize },
    #[error("vertex {vertex} is Dirichlet but carries value {value}")]
    DirichletValue { vertex: usize, value: f64 },
    #[error("singular Jacobian at Newton iteration {iteration}")]
    SingularJacobian { iteration: usize },
    #[error("linear solve failed: {0}")]
    Singular(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

/// Discretisation options shared by every assembly routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FemOptions {
    /// Polynomial degree integrated exactly on triangles. `0` is "unset".
    pub quadrature_degree: usize,
}

impl Default for FemOptions {
    fn default() -> Self {
        Self {
            quadrature_degree: 4,
        }
    }
}
