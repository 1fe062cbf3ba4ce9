use rayon::prelude::*;
use serde::Serialize;

use super::{indicator_test_function, partition_elements, OracleError, T_POINTS};
use crate::certificate::{delta_t, BoundConstantMode, GContribution};
use crate::fem::{interval_rule, local_element, DiscreteField, FemOptions};
use crate::mesh::{triangle_geometry, Mesh};
use crate::problem::{eval_flux, CoefficientModel, ConstantsBundle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PositiveVertices {
    /// `w > 0` only at `a_i`.
    One,
    /// `w > 0` at `a_i` and `a_j`.
    Two,
}

/// Integral left sides and claimed lower bounds of the three element
/// estimates on one sign-change element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRecord {
    pub element: usize,
    /// Global vertex ids `(a_i, a_j, a_k)` with `w(a_i) >= w(a_j) >= w(a_k)`.
    pub ordering: [usize; 3],
    pub positive: PositiveVertices,
    pub theta_j: f64,
    /// `lambda0 cos theta_j - Lambda1 C_f [- Lambda2 C_g]`; the principal
    /// bound assumes it is positive.
    pub p_t: f64,
    pub delta_w: f64,
    pub delta_u2: f64,
    pub mode: BoundConstantMode,
    /// `int int (da/dxi(x, u1, grad z(t)) grad w) . grad v`.
    pub principal_lhs: f64,
    pub principal_rhs: f64,
    /// `int int dA/deta(x, z(t), grad u2) w grad u2 . grad v`.
    pub eta_lhs: f64,
    pub eta_rhs: f64,
    /// `int int db/deta(x, z(t)) w v`.
    pub b_lhs: f64,
    pub b_rhs: f64,
}

impl LemmaRecord {
    pub fn principal_holds(&self, tol: f64) -> bool {
        self.principal_lhs >= self.principal_rhs - tol
    }

    pub fn eta_holds(&self, tol: f64) -> bool {
        self.eta_lhs >= self.eta_rhs - tol
    }

    pub fn b_holds(&self, tol: f64) -> bool {
        self.b_lhs >= self.b_rhs - tol
    }

    pub fn all_hold(&self, tol: f64) -> bool {
        self.principal_holds(tol) && self.eta_holds(tol) && self.b_holds(tol)
    }
}

/// Evaluates the three element estimates on `elem`, which must lie in the
/// sign-change set of `w = u1 - u2`. Ties in the vertex ordering go to the
/// lower global index.
#[allow(clippy::too_many_arguments)]
pub fn lemma_bound_check(
    model: &CoefficientModel,
    mesh: &Mesh,
    u1: &DiscreteField,
    u2: &DiscreteField,
    elem: usize,
    bundle: &ConstantsBundle,
    mode: BoundConstantMode,
    g: GContribution,
    opts: FemOptions,
) -> Result<LemmaRecord, OracleError> {
    let tri = mesh.as_triangle().ok_or(OracleError::NeedsTriangles)?;
    let w = u1.difference(u2);
    let v = indicator_test_function(&w);
    let verts = tri.triangles()[elem];
    let ones = verts.iter().filter(|&&a| v.at(a) == 1.0).count();
    if ones == 0 || ones == 3 {
        return Err(OracleError::NotInTc { element: elem });
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&p, &q| {
        w.at(verts[q])
            .total_cmp(&w.at(verts[p]))
            .then(verts[p].cmp(&verts[q]))
    });
    let [li, lj, lk] = order;
    let (wi, wj, wk) = (w.at(verts[li]), w.at(verts[lj]), w.at(verts[lk]));
    let geom = triangle_geometry(tri.triangle_coords(elem));
    let theta_j = geom.angles[lj];
    let mut p_t = bundle.lambda0 * theta_j.cos() - bundle.lambda1 * bundle.c_f;
    if g == GContribution::FullG {
        p_t -= bundle.lambda2 * bundle.c_g;
    }
    let x = mode.gamma_term(bundle.gamma_a, geom.r_t);
    let positive = if v.at(verts[lj]) == 1.0 {
        PositiveVertices::Two
    } else {
        PositiveVertices::One
    };
    let two_sin = 2.0 * theta_j.sin();
    let principal_rhs = match positive {
        PositiveVertices::One => ((wi - wj) * x + (wj - wk) * p_t) / two_sin,
        PositiveVertices::Two => ((wi - wj) * p_t + (wj - wk) * x) / two_sin,
    };
    let delta_w = delta_t(mesh, w.values(), elem);
    let delta_u2 = delta_t(mesh, u2.values(), elem);
    let c_w = mode.c_w();
    let eta_rhs = -delta_w * delta_u2 * c_w * bundle.k_eta * (1.0 + 1.0 / geom.r_t) / two_sin;
    let b_rhs = -delta_w * c_w * bundle.b_eta * geom.area;

    let le = local_element(mesh, elem, opts)?;
    let t_rule = interval_rule(T_POINTS);
    let (v1, v2, vw, vv) = (u1.values(), u2.values(), w.values(), v.values());
    let (gw, gv, g1, g2) = (le.gradient(vw), le.gradient(vv), le.gradient(v1), le.gradient(v2));
    let s2 = g2[0].hypot(g2[1]);
    let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
    let (mut principal_lhs, mut eta_lhs, mut b_lhs) = (0.0, 0.0, 0.0);
    for q in &le.points {
        let (e1, _) = le.eval(v1, q);
        let (e2, _) = le.eval(v2, q);
        let (wq, _) = le.eval(vw, q);
        let (vq, _) = le.eval(vv, q);
        for (&t, &wt) in t_rule.points.iter().zip(&t_rule.weights) {
            let w_qt = q.weight * wt;
            let gz = [t * g1[0] + (1.0 - t) * g2[0], t * g1[1] + (1.0 - t) * g2[1]];
            let z = t * e1 + (1.0 - t) * e2;
            let d = eval_flux(model, q.x, e1, gz).da_dxi;
            let dgw = [d[0][0] * gw[0] + d[0][1] * gw[1], d[1][0] * gw[0] + d[1][1] * gw[1]];
            principal_lhs += w_qt * dot(dgw, gv);
            eta_lhs += w_qt * model.d_coef_deta(q.x, z, s2) * wq * dot(g2, gv);
            b_lhs += w_qt * model.b(q.x, z).1 * wq * vq;
        }
    }
    Ok(LemmaRecord {
        element: elem,
        ordering: [verts[li], verts[lj], verts[lk]],
        positive,
        theta_j,
        p_t,
        delta_w,
        delta_u2,
        mode,
        principal_lhs,
        principal_rhs,
        eta_lhs,
        eta_rhs,
        b_lhs,
        b_rhs,
    })
}

/// [`lemma_bound_check`] on every sign-change element, in element order.
#[allow(clippy::too_many_arguments)]
pub fn lemma_audit(
    model: &CoefficientModel,
    mesh: &Mesh,
    u1: &DiscreteField,
    u2: &DiscreteField,
    bundle: &ConstantsBundle,
    mode: BoundConstantMode,
    g: GContribution,
    opts: FemOptions,
) -> Result<Vec<LemmaRecord>, OracleError> {
    let part = partition_elements(mesh, &u1.difference(u2));
    part.t_c
        .par_iter()
        .map(|&e| lemma_bound_check(model, mesh, u1, u2, e, bundle, mode, g, opts))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbsIntegral {
    /// `int_T |w|`, exact for linear `w`.
    pub exact: f64,
    /// `C_w delta_T(w) |T|`.
    pub bound: f64,
    /// Whether `w` changes sign on the element, where the bound is claimed.
    pub sign_change: bool,
}

/// Exact `int_T |w|` for a linear `w` by cutting along its zero line.
pub fn abs_integral_bound(
    mesh: &Mesh,
    w: &[f64],
    elem: usize,
    mode: BoundConstantMode,
) -> Result<AbsIntegral, OracleError> {
    let tri = mesh.as_triangle().ok_or(OracleError::NeedsTriangles)?;
    let verts = tri.triangles()[elem];
    let vals = verts.map(|a| w[a]);
    let area = mesh.measure(elem);
    let total = area * (vals[0] + vals[1] + vals[2]) / 3.0;
    let pos: Vec<usize> = (0..3).filter(|&k| vals[k] > 0.0).collect();
    let exact = match pos.len() {
        0 | 3 => total.abs(),
        n => {
            // The lone vertex has the minority sign; its corner triangle is
            // cut off by the zero line.
            let lone = if n == 1 {
                pos[0]
            } else {
                (0..3).find(|k| !pos.contains(k)).unwrap()
            };
            let wl = vals[lone];
            let ratio = |k: usize| wl / (wl - vals[k]);
            let others: Vec<usize> = (0..3).filter(|&k| k != lone).collect();
            let corner = area * ratio(others[0]) * ratio(others[1]) * wl / 3.0;
            if n == 1 {
                2.0 * corner - total
            } else {
                total - 2.0 * corner
            }
        }
    };
    let sign_change = (1..=2).contains(&pos.len());
    Ok(AbsIntegral {
        exact,
        bound: mode.c_w() * delta_t(mesh, w, elem) * area,
        sign_change,
    })
}
