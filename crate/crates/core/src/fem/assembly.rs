//! Residual, Jacobian and semilinear-system assembly.
//!
//! Elements are processed in parallel and their local contributions are
//! reduced sequentially in element order, so results are bitwise identical
//! for any thread count.

use rayon::prelude::*;

use super::quadrature::{interval_rule, IntervalRule, TriangleRule};
use super::{
    basis_gradients, interval_gradients, triangle_rule, CsrMatrix, DiscreteField, DofMap,
    FemError, FemOptions, SparseSystem,
};
use crate::mesh::{Mesh, NeumannFacet};
use crate::problem::{eval_flux, CoefficientModel, ProblemError};

/// A quadrature point of one element.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPoint {
    pub x: [f64; 2],
    /// Values of the element's nodal basis functions at `x`.
    pub lambda: Vec<f64>,
    /// Quadrature weight times element measure.
    pub weight: f64,
}

/// Geometry and quadrature of one element, in the element's vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalElement {
    pub id: usize,
    pub vertices: Vec<usize>,
    pub grads: Vec<[f64; 2]>,
    pub measure: f64,
    pub points: Vec<QuadPoint>,
}

impl LocalElement {
    /// `(u, grad u)` of a nodal field at quadrature point `q`.
    pub fn eval(&self, values: &[f64], q: &QuadPoint) -> (f64, [f64; 2]) {
        let mut u = 0.0;
        let mut g = [0.0; 2];
        for (k, &v) in self.vertices.iter().enumerate() {
            u += q.lambda[k] * values[v];
            g[0] += values[v] * self.grads[k][0];
            g[1] += values[v] * self.grads[k][1];
        }
        (u, g)
    }

    /// Constant gradient of a nodal field on this element.
    pub fn gradient(&self, values: &[f64]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for (k, &v) in self.vertices.iter().enumerate() {
            g[0] += values[v] * self.grads[k][0];
            g[1] += values[v] * self.grads[k][1];
        }
        g
    }
}

struct Rules {
    tri: TriangleRule,
    int: IntervalRule,
}

impl Rules {
    fn new(opts: FemOptions) -> Result<Self, FemError> {
        Ok(Self {
            tri: triangle_rule(opts.quadrature_degree)?,
            int: IntervalRule::for_degree(opts.quadrature_degree)?,
        })
    }
}

fn build_local(mesh: &Mesh, e: usize, rules: &Rules) -> Result<LocalElement, FemError> {
    let vertices = mesh.element_vertices(e);
    let p: Vec<[f64; 2]> = vertices.iter().map(|&v| mesh.point(v)).collect();
    let measure = mesh.measure(e);
    let (grads, points) = match mesh {
        Mesh::Interval(_) => {
            let g = interval_gradients(p[0][0], p[1][0], e)?;
            let pts = rules
                .int
                .points
                .iter()
                .zip(&rules.int.weights)
                .map(|(&t, &w)| QuadPoint {
                    x: [(1.0 - t) * p[0][0] + t * p[1][0], 0.0],
                    lambda: vec![1.0 - t, t],
                    weight: w * measure,
                })
                .collect();
            (g.to_vec(), pts)
        }
        Mesh::Triangle(_) => {
            let g = basis_gradients([p[0], p[1], p[2]], e)?;
            let pts = rules
                .tri
                .points
                .iter()
                .zip(&rules.tri.weights)
                .map(|(l, &w)| QuadPoint {
                    x: [
                        l[0] * p[0][0] + l[1] * p[1][0] + l[2] * p[2][0],
                        l[0] * p[0][1] + l[1] * p[1][1] + l[2] * p[2][1],
                    ],
                    lambda: l.to_vec(),
                    weight: w * measure,
                })
                .collect();
            (g.to_vec(), pts)
        }
    };
    Ok(LocalElement {
        id: e,
        vertices,
        grads,
        measure,
        points,
    })
}

/// Local geometry and quadrature of element `e`.
pub fn local_element(mesh: &Mesh, e: usize, opts: FemOptions) -> Result<LocalElement, FemError> {
    build_local(mesh, e, &Rules::new(opts)?)
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn check_field(mesh: &Mesh, u: &DiscreteField) -> Result<(), FemError> {
    if u.len() != mesh.num_vertices() {
        return Err(FemError::FieldLength {
            expected: mesh.num_vertices(),
            got: u.len(),
        });
    }
    Ok(())
}

/// Local residual of one element; `vals` are global nodal values.
pub fn element_residual(model: &CoefficientModel, le: &LocalElement, vals: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; le.vertices.len()];
    for q in &le.points {
        let (eta, xi) = le.eval(vals, q);
        let fl = eval_flux(model, q.x, eta, xi);
        let (b, _) = model.b(q.x, eta);
        for (i, ri) in r.iter_mut().enumerate() {
            *ri += q.weight * (dot(fl.a, le.grads[i]) + b * q.lambda[i]);
        }
    }
    r
}

/// Local Jacobian of one element, `k[i][j] = dR_i / du_j`.
pub fn element_jacobian(
    model: &CoefficientModel,
    le: &LocalElement,
    vals: &[f64],
) -> Vec<Vec<f64>> {
    let n = le.vertices.len();
    let mut k = vec![vec![0.0; n]; n];
    for q in &le.points {
        let (eta, xi) = le.eval(vals, q);
        let fl = eval_flux(model, q.x, eta, xi);
        let (_, db) = model.b(q.x, eta);
        for j in 0..n {
            let gj = le.grads[j];
            let dg = [
                fl.da_dxi[0][0] * gj[0] + fl.da_dxi[0][1] * gj[1],
                fl.da_dxi[1][0] * gj[0] + fl.da_dxi[1][1] * gj[1],
            ];
            for i in 0..n {
                let gi = le.grads[i];
                k[i][j] += q.weight
                    * (dot(dg, gi)
                        + fl.d_coef_deta * q.lambda[j] * dot(xi, gi)
                        + db * q.lambda[j] * q.lambda[i]);
            }
        }
    }
    k
}

/// Local stiffness and `t`-averaged mass matrices of one element.
pub fn element_semilinear(
    model: &CoefficientModel,
    le: &LocalElement,
    v1: &[f64],
    v2: &[f64],
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let t_rule = interval_rule(3);
    let n = le.vertices.len();
    let mut s = vec![vec![0.0; n]; n];
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            s[i][j] = le.measure * dot(le.grads[i], le.grads[j]);
        }
    }
    for q in &le.points {
        let (z1, _) = le.eval(v1, q);
        let (z2, _) = le.eval(v2, q);
        let avg: f64 = t_rule
            .points
            .iter()
            .zip(&t_rule.weights)
            .map(|(&t, &w)| w * model.b(q.x, t * z1 + (1.0 - t) * z2).1)
            .sum();
        for i in 0..n {
            for j in 0..n {
                m[i][j] += q.weight * avg * (q.lambda[i] * q.lambda[j]);
            }
        }
    }
    (s, m)
}

/// Runs `f` on every element in parallel, returning results in element order.
fn per_element<T: Send>(
    mesh: &Mesh,
    opts: FemOptions,
    f: impl Fn(&LocalElement) -> T + Sync,
) -> Result<Vec<T>, FemError> {
    let rules = Rules::new(opts)?;
    (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| build_local(mesh, e, &rules).map(|le| f(&le)))
        .collect()
}

/// Residual at every vertex, Dirichlet rows included:
/// `R_j = int a(x,u,grad u).grad phi_j + b(x,u) phi_j - int_{Gamma_N} psi phi_j`.
pub fn assemble_residual_full(
    model: &CoefficientModel,
    mesh: &Mesh,
    u: &DiscreteField,
    opts: FemOptions,
) -> Result<Vec<f64>, FemError> {
    check_field(mesh, u)?;
    let vals = u.values();
    let locals = per_element(mesh, opts, |le| {
        (le.vertices.clone(), element_residual(model, le, vals))
    })?;
    let mut res = vec![0.0; mesh.num_vertices()];
    for (verts, r) in locals {
        for (v, x) in verts.into_iter().zip(r) {
            res[v] += x;
        }
    }
    for facet in mesh.neumann_facets() {
        match facet {
            NeumannFacet::Point { vertex, psi } => res[vertex] -= psi,
            NeumannFacet::Edge { vertices: [p, q], psi } => {
                let (a, b) = (mesh.point(p), mesh.point(q));
                let half = 0.5 * psi * (a[0] - b[0]).hypot(a[1] - b[1]);
                res[p] -= half;
                res[q] -= half;
            }
        }
    }
    Ok(res)
}

/// Residual restricted to the free vertices, in dof order.
pub fn assemble_residual(
    model: &CoefficientModel,
    mesh: &Mesh,
    u: &DiscreteField,
    opts: FemOptions,
) -> Result<Vec<f64>, FemError> {
    let full = assemble_residual_full(model, mesh, u, opts)?;
    let dofs = DofMap::new(mesh);
    Ok(dofs.free.iter().map(|&v| full[v]).collect())
}

fn scatter(
    dofs: &DofMap,
    locals: Vec<(Vec<usize>, Vec<Vec<f64>>)>,
) -> CsrMatrix {
    let mut t = Vec::new();
    for (verts, k) in locals {
        for (i, &vi) in verts.iter().enumerate() {
            let Some(r) = dofs.index[vi] else { continue };
            for (j, &vj) in verts.iter().enumerate() {
                if let Some(c) = dofs.index[vj] {
                    t.push((r, c, k[i][j]));
                }
            }
        }
    }
    CsrMatrix::from_triplets(dofs.len(), t)
}

/// Jacobian of [`assemble_residual`] over the free vertices, with
/// `rhs = -R(u)` so that a Newton update solves `matrix * du = rhs`.
///
/// Row `i`, column `j`:
/// `int (da/dxi grad phi_j).grad phi_i + dA/deta phi_j grad u.grad phi_i + db/deta phi_j phi_i`.
pub fn assemble_jacobian(
    model: &CoefficientModel,
    mesh: &Mesh,
    u: &DiscreteField,
    opts: FemOptions,
) -> Result<SparseSystem, FemError> {
    check_field(mesh, u)?;
    let vals = u.values();
    let locals = per_element(mesh, opts, |le| {
        (le.vertices.clone(), element_jacobian(model, le, vals))
    })?;
    let dof_map = DofMap::new(mesh);
    let matrix = scatter(&dof_map, locals);
    let rhs = assemble_residual(model, mesh, u, opts)?
        .into_iter()
        .map(|r| -r)
        .collect();
    Ok(SparseSystem {
        matrix,
        rhs,
        dof_map,
    })
}

/// Stiffness and averaged mass matrices of a semilinear problem, kept apart.
#[derive(Debug, Clone, PartialEq)]
pub struct SemilinearSystem {
    /// `s_ij = int grad phi_i . grad phi_j`.
    pub stiffness: CsrMatrix,
    /// `m_ij = int int_0^1 db/deta(x, t u1 + (1-t) u2) dt phi_i phi_j`.
    pub mass: CsrMatrix,
    pub dof_map: DofMap,
}

impl SemilinearSystem {
    /// `S + M`.
    pub fn matrix(&self) -> CsrMatrix {
        self.stiffness.add(1.0, &self.mass, 1.0)
    }

    /// `S + M` as a homogeneous system.
    pub fn system(&self) -> SparseSystem {
        SparseSystem {
            matrix: self.matrix(),
            rhs: vec![0.0; self.dof_map.len()],
            dof_map: self.dof_map.clone(),
        }
    }
}

/// Assembles the difference system `(S + M)(U1 - U2) = 0` for two solutions
/// of `-Laplace u + b(x,u) = 0`. The `t` integral uses 3-point Gauss.
pub fn assemble_semilinear_system(
    model: &CoefficientModel,
    mesh: &Mesh,
    u1: &DiscreteField,
    u2: &DiscreteField,
    opts: FemOptions,
) -> Result<SemilinearSystem, FemError> {
    if !model.is_semilinear() {
        return Err(ProblemError::NotSemilinear.into());
    }
    check_field(mesh, u1)?;
    check_field(mesh, u2)?;
    let (v1, v2) = (u1.values(), u2.values());
    let locals = per_element(mesh, opts, |le| {
        let (s, m) = element_semilinear(model, le, v1, v2);
        (le.vertices.clone(), s, m)
    })?;
    let dof_map = DofMap::new(mesh);
    let (mut ls, mut lm) = (Vec::new(), Vec::new());
    for (v, s, m) in locals {
        ls.push((v.clone(), s));
        lm.push((v, m));
    }
    Ok(SemilinearSystem {
        stiffness: scatter(&dof_map, ls),
        mass: scatter(&dof_map, lm),
        dof_map,
    })
}
