use rayon::prelude::*;
use serde::Serialize;

use super::{indicator_test_function, OracleError};
use crate::fem::{assemble_residual_full, local_element, DiscreteField, DofMap, FemOptions};
use crate::mesh::Mesh;
use crate::problem::{eval_flux, CoefficientModel};

/// Sign of the residual tested against every nonnegative basis function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualVerdict {
    pub holds: bool,
    /// Residual entry furthest on the wrong side (or closest to it).
    pub worst_entry: f64,
    pub worst_vertex: Option<usize>,
}

/// `sign = 1` checks `R_j <= tol`, `sign = -1` checks `R_j >= -tol`.
fn residual_sign(
    model: &CoefficientModel,
    mesh: &Mesh,
    u: &DiscreteField,
    tol: f64,
    sign: f64,
    opts: FemOptions,
) -> Result<ResidualVerdict, OracleError> {
    let r = assemble_residual_full(model, mesh, u, opts)?;
    let dofs = DofMap::new(mesh);
    let worst = dofs
        .free
        .iter()
        .map(|&v| (v, sign * r[v]))
        .fold(None::<(usize, f64)>, |acc, (v, x)| match acc {
            Some((_, y)) if y >= x => acc,
            _ => Some((v, x)),
        });
    Ok(match worst {
        Some((v, x)) => ResidualVerdict {
            holds: x <= tol,
            worst_entry: sign * x,
            worst_vertex: Some(v),
        },
        None => ResidualVerdict {
            holds: true,
            worst_entry: 0.0,
            worst_vertex: None,
        },
    })
}

/// `u` is a subsolution iff every free residual entry is at most `tol`.
pub fn verify_subsolution(
    model: &CoefficientModel,
    mesh: &Mesh,
    u: &DiscreteField,
    tol: f64,
    opts: FemOptions,
) -> Result<ResidualVerdict, OracleError> {
    residual_sign(model, mesh, u, tol, 1.0, opts)
}

/// `u` is a supersolution iff every free residual entry is at least `-tol`.
pub fn verify_supersolution(
    model: &CoefficientModel,
    mesh: &Mesh,
    u: &DiscreteField,
    tol: f64,
    opts: FemOptions,
) -> Result<ResidualVerdict, OracleError> {
    residual_sign(model, mesh, u, tol, -1.0, opts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub is_subsolution: bool,
    pub is_supersolution: bool,
    pub subsolution: ResidualVerdict,
    pub supersolution: ResidualVerdict,
    /// `u1 <= u2 + tol` at every vertex.
    pub comparison_holds: bool,
    pub max_excess: f64,
    pub comparison_lhs: f64,
}

/// Checks that `u1` is a subsolution, `u2` a supersolution and `u1 <= u2`.
pub fn verify_pair(
    model: &CoefficientModel,
    mesh: &Mesh,
    u1: &DiscreteField,
    u2: &DiscreteField,
    tol: f64,
    opts: FemOptions,
) -> Result<PairVerdict, OracleError> {
    let sub = verify_subsolution(model, mesh, u1, tol, opts)?;
    let sup = verify_supersolution(model, mesh, u2, tol, opts)?;
    let max_excess = u1
        .values()
        .iter()
        .zip(u2.values())
        .map(|(a, b)| a - b)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PairVerdict {
        is_subsolution: sub.holds,
        is_supersolution: sup.holds,
        subsolution: sub,
        supersolution: sup,
        comparison_holds: max_excess <= tol,
        max_excess,
        comparison_lhs: comparison_lhs(model, mesh, u1, u2, opts)?,
    })
}

/// `int (a(x,u1,grad u1) - a(x,u2,grad u2)).grad v + (b(x,u1) - b(x,u2)) v`
/// with `v` the indicator of `u1 - u2 > 0`, by element quadrature.
pub fn comparison_lhs(
    model: &CoefficientModel,
    mesh: &Mesh,
    u1: &DiscreteField,
    u2: &DiscreteField,
    opts: FemOptions,
) -> Result<f64, OracleError> {
    let v = indicator_test_function(&u1.difference(u2));
    let (v1, v2, vv) = (u1.values(), u2.values(), v.values());
    let parts = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| {
            if mesh.element_vertices(e).iter().all(|&a| vv[a] == 0.0) {
                return Ok(0.0);
            }
            let le = local_element(mesh, e, opts)?;
            let gv = le.gradient(vv);
            let mut s = 0.0;
            for q in &le.points {
                let (e1, g1) = le.eval(v1, q);
                let (e2, g2) = le.eval(v2, q);
                let (vq, _) = le.eval(vv, q);
                let a1 = eval_flux(model, q.x, e1, g1).a;
                let a2 = eval_flux(model, q.x, e2, g2).a;
                let db = model.b(q.x, e1).0 - model.b(q.x, e2).0;
                s += q.weight * ((a1[0] - a2[0]) * gv[0] + (a1[1] - a2[1]) * gv[1] + db * vq);
            }
            Ok(s)
        })
        .collect::<Result<Vec<f64>, OracleError>>()?;
    Ok(parts.iter().sum())
}
