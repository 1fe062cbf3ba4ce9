//! Damped Newton iteration for the discrete weak form.

use serde::Serialize;

use super::linalg::solve_sparse;
use super::{assemble_jacobian, assemble_residual, DiscreteField, FemError, FemOptions};
use crate::mesh::Mesh;
use crate::problem::CoefficientModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Converged iff the residual l2 norm is at most `tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Backtracking factor applied to the step length.
    pub damping: f64,
    /// Shortest step tried before accepting without decrease.
    pub min_step: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
            damping: 0.5,
            min_step: 2f64.powi(-20),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    /// Residual norm after the step.
    pub residual_norm: f64,
    /// Accepted step length.
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub field: DiscreteField,
    pub iterations: usize,
    pub residual_norm: f64,
    pub converged: bool,
    pub initial_residual_norm: f64,
    pub history: Vec<IterationRecord>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Newton with backtracking on the residual norm. Any decrease is accepted;
/// if none is found down to `min_step`, that step is taken anyway.
///
/// Non-convergence is reported through `converged`, a singular Jacobian as
/// an error carrying the iteration index.
pub fn solve_newton(
    model: &CoefficientModel,
    mesh: &Mesh,
    config: &NewtonConfig,
    u0: &DiscreteField,
    opts: FemOptions,
) -> Result<SolveResult, FemError> {
    let mut u = u0.clone();
    let mut r_norm = norm(&assemble_residual(model, mesh, &u, opts)?);
    let initial = r_norm;
    let mut history = Vec::new();
    let mut iterations = 0;
    while r_norm > config.tol && iterations < config.max_iter && r_norm.is_finite() {
        iterations += 1;
        let sys = assemble_jacobian(model, mesh, &u, opts)?;
        let du = solve_sparse(&sys.matrix, &sys.rhs)
            .map_err(|_| FemError::SingularJacobian {
                iteration: iterations,
            })?;
        let mut step = 1.0;
        let (trial, trial_norm) = loop {
            let mut trial = u.clone();
            trial.add_free(&du, step);
            let n = norm(&assemble_residual(model, mesh, &trial, opts)?);
            if n < r_norm || step * config.damping < config.min_step {
                break (trial, n);
            }
            step *= config.damping;
        };
        u = trial;
        r_norm = trial_norm;
        history.push(IterationRecord {
            residual_norm: r_norm,
            step,
        });
    }
    Ok(SolveResult {
        field: u,
        iterations,
        residual_norm: r_norm,
        converged: r_norm <= config.tol,
        initial_residual_norm: initial,
        history,
    })
}
