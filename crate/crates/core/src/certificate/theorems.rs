use rayon::prelude::*;

use super::{
    delta_t, BoundConstantMode, CertificateError, CertificateReport, ElementCertificate,
    ElementConstants, GContribution, Theorem,
};
use crate::fem::DiscreteField;
use crate::mesh::{triangle_geometry, triangle_mesh_quality, ElementGeometry, Mesh, Mesh1D, TriMesh2D};
use crate::problem::ConstantsBundle;

fn check_len(mesh: &Mesh, field: &DiscreteField) -> Result<(), CertificateError> {
    if field.len() != mesh.num_vertices() {
        return Err(CertificateError::Mismatch(format!(
            "field has {} values, mesh has {} vertices",
            field.len(),
            mesh.num_vertices()
        )));
    }
    Ok(())
}

/// One-dimensional condition on each interval:
/// `2 gamma_a / K_eta - |u(a_k) - u(a_{k-1})| - (B_eta / K_eta) h_k^2 > 0`.
///
/// With `K_eta = 0` the condition is vacuous when `B_eta = 0` (every interval
/// passes with margin `2 gamma_a`, and a note says so) and the theorem is
/// inapplicable otherwise.
pub fn certify_1d(
    mesh: &Mesh1D,
    field: &DiscreteField,
    bundle: &ConstantsBundle,
) -> Result<CertificateReport, CertificateError> {
    bundle.check_basic()?;
    let m = Mesh::Interval(mesh.clone());
    check_len(&m, field)?;
    let mode = BoundConstantMode::default();
    let (g, k, b) = (bundle.gamma_a, bundle.k_eta, bundle.b_eta);
    if k == 0.0 && b > 0.0 {
        return Ok(CertificateReport::inapplicable(
            Theorem::OneD,
            mode,
            bundle,
            None,
            "k_eta = 0 with b_eta > 0: the one-dimensional condition is undefined",
        ));
    }
    let vals = field.values();
    let elements = (0..mesh.num_intervals())
        .into_par_iter()
        .map(|e| {
            let h = mesh.h(e);
            let d = delta_t(&m, vals, e);
            let margin = if k == 0.0 {
                2.0 * g
            } else {
                2.0 * g / k - d - (b / k) * h * h
            };
            ElementCertificate {
                id: e,
                delta_u: Some(d),
                p_star: None,
                margin,
                pass: margin > 0.0,
                constants_used: ElementConstants::Interval { h },
            }
        })
        .collect();
    let mut r = CertificateReport::from_elements(Theorem::OneD, mode, bundle, None, elements);
    if k == 0.0 {
        r.notes.push(
            "k_eta = 0 and b_eta = 0: condition vacuous, margins reported as 2 gamma_a".into(),
        );
    }
    Ok(r)
}

/// `p*_T = min{lambda0 c_T - Lambda1 C_f - Lambda2 C_g, gamma term}`; the
/// relative-growth variant drops `Lambda2 C_g` and requires
/// `C_g_hat <= c_min`. The gamma term is `gamma_a * r_T` in corrected mode
/// and `gamma_a / r_T` in paper mode.
pub fn p_star(
    geom: &ElementGeometry,
    bundle: &ConstantsBundle,
    g: GContribution,
    mode: BoundConstantMode,
    c_min: f64,
) -> Result<f64, CertificateError> {
    let mut lower = bundle.lambda0 * geom.c_t - bundle.lambda1 * bundle.c_f;
    match g {
        GContribution::FullG => lower -= bundle.lambda2 * bundle.c_g,
        GContribution::RelativeG => {
            let hat = relative_constant(bundle)?;
            if hat > c_min {
                return Err(CertificateError::Inapplicable(format!(
                    "c_g_hat = {hat} exceeds c_min = {c_min}"
                )));
            }
        }
    }
    Ok(lower.min(mode.gamma_term(bundle.gamma_a, geom.r_t)))
}

fn relative_constant(bundle: &ConstantsBundle) -> Result<f64, CertificateError> {
    bundle.c_g_hat.ok_or_else(|| {
        CertificateError::Bundle(crate::problem::ProblemError::InvalidBundle(
            "relative-growth certificate needs c_g_hat".into(),
        ))
    })
}

/// Two-dimensional condition on each element:
/// `p*_T - C_w K_eta delta_T(u) (1 + 1/r_T) - 2 C_w B_eta |T| s_T > 0`.
///
/// Non-acute meshes, a failed global hypothesis
/// `lambda0 c_min - Lambda1 C_f - Lambda2 C_g > 0` and (relative growth)
/// `C_g_hat > c_min` all give an inapplicable report.
pub fn certify_2d(
    mesh: &TriMesh2D,
    field: &DiscreteField,
    bundle: &ConstantsBundle,
    g: GContribution,
    mode: BoundConstantMode,
) -> Result<CertificateReport, CertificateError> {
    bundle.check_structural()?;
    let m = Mesh::Triangle(mesh.clone());
    check_len(&m, field)?;
    let theorem = match g {
        GContribution::FullG => Theorem::TwoD,
        GContribution::RelativeG => Theorem::TwoDRelativeG,
    };
    let q = triangle_mesh_quality(mesh);
    if !q.acute {
        return Ok(CertificateReport::inapplicable(
            theorem,
            mode,
            bundle,
            None,
            format!("mesh is not acute (largest angle {} rad)", q.t_max),
        ));
    }
    let mut hyp = bundle.lambda0 * q.c_min - bundle.lambda1 * bundle.c_f;
    match g {
        GContribution::FullG => hyp -= bundle.lambda2 * bundle.c_g,
        GContribution::RelativeG => {
            let hat = relative_constant(bundle)?;
            if hat > q.c_min {
                return Ok(CertificateReport::inapplicable(
                    theorem,
                    mode,
                    bundle,
                    None,
                    format!("c_g_hat = {hat} exceeds c_min = {}", q.c_min),
                ));
            }
        }
    }
    if !(hyp > 0.0) {
        return Ok(CertificateReport::inapplicable(
            theorem,
            mode,
            bundle,
            Some(hyp),
            format!("global hypothesis fails: lambda0 c_min - Lambda C = {hyp}"),
        ));
    }
    let c_w = mode.c_w();
    let vals = field.values();
    let elements = (0..mesh.triangles().len())
        .into_par_iter()
        .map(|e| {
            let geom = triangle_geometry(mesh.triangle_coords(e));
            let ps = p_star(&geom, bundle, g, mode, q.c_min)?;
            let d = delta_t(&m, vals, e);
            let margin = ps
                - c_w * bundle.k_eta * d * (1.0 + 1.0 / geom.r_t)
                - 2.0 * c_w * bundle.b_eta * geom.area * geom.s_t;
            Ok(ElementCertificate {
                id: e,
                delta_u: Some(d),
                p_star: Some(ps),
                margin,
                pass: margin > 0.0,
                constants_used: triangle_constants(&geom),
            })
        })
        .collect::<Result<Vec<_>, CertificateError>>()?;
    Ok(CertificateReport::from_elements(
        theorem,
        mode,
        bundle,
        Some(hyp),
        elements,
    ))
}

fn triangle_constants(geom: &ElementGeometry) -> ElementConstants {
    ElementConstants::Triangle {
        c_t: geom.c_t,
        s_t: geom.s_t,
        r_t: geom.r_t,
        area: geom.area,
        min_cot: geom.min_cot(),
    }
}

/// Mesh conditions for `-Laplace u + b(x,u) = 0`, in multiplied form.
///
/// `Semilinear51` (strict): `2 - B_eta h_k^2` in 1D and
/// `min cot - 2 C_w B_eta |T|` in 2D. `Semilinear52` (non-strict):
/// `6 - B_eta h_k^2` and `6 min cot - B_eta |T|`.
pub fn certify_semilinear(
    mesh: &Mesh,
    bundle: &ConstantsBundle,
    theorem: Theorem,
    mode: BoundConstantMode,
) -> Result<CertificateReport, CertificateError> {
    if !matches!(theorem, Theorem::Semilinear51 | Theorem::Semilinear52) {
        return Err(CertificateError::Mismatch(format!(
            "`{}` is not a semilinear theorem",
            theorem.name()
        )));
    }
    let b = bundle.b_eta;
    if !(b >= 0.0 && b.is_finite()) {
        return Err(crate::problem::ProblemError::InvalidBundle("b_eta must be nonnegative".into()).into());
    }
    let strict51 = theorem == Theorem::Semilinear51;
    let decide = |m: f64| if strict51 { m > 0.0 } else { m >= 0.0 };
    let elements: Vec<ElementCertificate> = match mesh {
        Mesh::Interval(m) => (0..m.num_intervals())
            .map(|e| {
                let h = m.h(e);
                let margin = if strict51 { 2.0 } else { 6.0 } - b * h * h;
                ElementCertificate {
                    id: e,
                    delta_u: None,
                    p_star: None,
                    margin,
                    pass: decide(margin),
                    constants_used: ElementConstants::Interval { h },
                }
            })
            .collect(),
        Mesh::Triangle(t) => {
            let q = triangle_mesh_quality(t);
            if !q.acute {
                return Ok(CertificateReport::inapplicable(
                    theorem,
                    mode,
                    bundle,
                    None,
                    format!("mesh is not acute (largest angle {} rad)", q.t_max),
                ));
            }
            let c_w = mode.c_w();
            (0..t.triangles().len())
                .into_par_iter()
                .map(|e| {
                    let geom = triangle_geometry(t.triangle_coords(e));
                    let cot = geom.min_cot();
                    let margin = if strict51 {
                        cot - 2.0 * c_w * b * geom.area
                    } else {
                        6.0 * cot - b * geom.area
                    };
                    ElementCertificate {
                        id: e,
                        delta_u: None,
                        p_star: None,
                        margin,
                        pass: decide(margin),
                        constants_used: triangle_constants(&geom),
                    }
                })
                .collect()
        }
    };
    let mut r = CertificateReport::from_elements(theorem, mode, bundle, None, elements);
    if b == 0.0 {
        r.notes.push("b_eta = 0: condition holds on every mesh".into());
    }
    Ok(r)
}

/// Dispatches on `theorem`. The quasilinear theorems need `field`.
pub fn certify(
    theorem: Theorem,
    mesh: &Mesh,
    field: Option<&DiscreteField>,
    bundle: &ConstantsBundle,
    mode: BoundConstantMode,
) -> Result<CertificateReport, CertificateError> {
    let need_field = || {
        field.ok_or_else(|| CertificateError::Mismatch(format!("`{}` needs a solution", theorem.name())))
    };
    match (theorem, mesh) {
        (Theorem::OneD, Mesh::Interval(m)) => certify_1d(m, need_field()?, bundle),
        (Theorem::TwoD, Mesh::Triangle(m)) => {
            certify_2d(m, need_field()?, bundle, GContribution::FullG, mode)
        }
        (Theorem::TwoDRelativeG, Mesh::Triangle(m)) => {
            certify_2d(m, need_field()?, bundle, GContribution::RelativeG, mode)
        }
        (Theorem::Semilinear51 | Theorem::Semilinear52, _) => {
            certify_semilinear(mesh, bundle, theorem, mode)
        }
        (t, m) => Err(CertificateError::Mismatch(format!(
            "`{}` does not apply to a {}D mesh",
            t.name(),
            m.dim()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Status;
    use crate::mesh::{
        equilateral_strip, uniform_interval_mesh, unit_square_acute, BoundaryMarker, EndCondition,
    };
    use approx::assert_relative_eq;

    fn interval(h: f64, n: usize) -> Mesh1D {
        uniform_interval_mesh(0.0, h * n as f64, n, EndCondition::dirichlet(), EndCondition::neumann(0.0))
            .unwrap()
    }

    fn field_1d(m: &Mesh1D, vals: Vec<f64>) -> DiscreteField {
        DiscreteField::new(&Mesh::Interval(m.clone()), vals).unwrap()
    }

    #[test]
    fn one_d_margins() {
        let m = interval(1.0, 1);
        let b = ConstantsBundle::basic(1.0, 1.0, 0.0);
        let r = certify_1d(&m, &field_1d(&m, vec![0.0, 1.9]), &b).unwrap();
        assert_relative_eq!(r.elements[0].margin, 0.1, epsilon = 1e-15);
        assert!(r.global_pass);
        let r = certify_1d(&m, &field_1d(&m, vec![0.0, 2.0]), &b).unwrap();
        assert_eq!(r.elements[0].margin, 0.0);
        assert!(!r.global_pass);
        assert_eq!(r.status, Status::Fail);

        let b = ConstantsBundle::basic(1.0, 1.0, 2.0);
        let r = certify_1d(&m, &field_1d(&m, vec![0.0, 0.0]), &b).unwrap();
        assert_eq!(r.elements[0].margin, 0.0);
        assert!(!r.global_pass);
        let half = interval(0.5, 1);
        let r = certify_1d(&half, &field_1d(&half, vec![0.0, 0.0]), &b).unwrap();
        assert_eq!(r.elements[0].margin, 1.5);
        assert!(r.global_pass);
    }

    #[test]
    fn one_d_degenerate_k() {
        let m = interval(1.0, 2);
        let f = field_1d(&m, vec![0.0, 5.0, -3.0]);
        let r = certify_1d(&m, &f, &ConstantsBundle::basic(1.0, 0.0, 0.0)).unwrap();
        assert!(r.global_pass);
        assert_eq!(r.notes.len(), 1);
        let r = certify_1d(&m, &f, &ConstantsBundle::basic(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(r.status, Status::Inapplicable);
        assert!(!r.global_pass);
    }

    fn equilateral() -> ElementGeometry {
        triangle_geometry([[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]])
    }

    #[test]
    fn p_star_examples() {
        let b = ConstantsBundle::basic(1.0, 1.0, 0.0);
        let g = equilateral();
        for mode in [BoundConstantMode::Paper, BoundConstantMode::Corrected] {
            let p = p_star(&g, &b, GContribution::FullG, mode, 0.5).unwrap();
            assert_relative_eq!(p, 0.5, epsilon = 1e-12);
        }
        let mut heavy = b.clone();
        heavy.lambda1 = 1.0;
        heavy.c_f = 0.6;
        let p = p_star(&g, &heavy, GContribution::FullG, BoundConstantMode::Corrected, 0.5).unwrap();
        assert!(p <= 0.0);
        let mut rel = b.clone();
        rel.c_g_hat = Some(0.7);
        assert!(matches!(
            p_star(&g, &rel, GContribution::RelativeG, BoundConstantMode::Corrected, 0.5),
            Err(CertificateError::Inapplicable(_))
        ));
    }

    #[test]
    fn equilateral_threshold_is_three_fourteenths() {
        let mesh = equilateral_strip(3, 2, 1.0, BoundaryMarker::Dirichlet);
        let m = Mesh::Triangle(mesh.clone());
        let b = ConstantsBundle::basic(1.0, 1.0, 0.0);
        let v = m.dirichlet_mask().iter().position(|d| !d).unwrap();
        for (d, expect) in [(3.0 / 14.0 - 1e-9, true), (3.0 / 14.0 + 1e-9, false)] {
            let f = DiscreteField::from_fn(&m, |p| if p == m.point(v) { d } else { 0.0 });
            let r = certify_2d(&mesh, &f, &b, GContribution::FullG, BoundConstantMode::Paper)
                .unwrap();
            for e in &r.elements {
                let touches = mesh.triangles()[e.id].contains(&v);
                assert_eq!(e.pass, !touches || expect, "delta {d}, element {}", e.id);
            }
        }
    }

    #[test]
    fn constant_field_margins_equal_p_star() {
        let mesh = unit_square_acute(BoundaryMarker::Dirichlet);
        let m = Mesh::Triangle(mesh.clone());
        let b = ConstantsBundle::basic(1.0, 3.0, 0.0);
        let r = certify_2d(&mesh, &DiscreteField::zeros(&m), &b, GContribution::FullG, BoundConstantMode::Corrected)
            .unwrap();
        assert!(r.global_pass);
        for e in &r.elements {
            assert_eq!(e.margin, e.p_star.unwrap());
        }
    }

    #[test]
    fn right_triangles_are_inapplicable() {
        let mesh = TriMesh2D::with_uniform_boundary(
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            vec![[0, 1, 2], [0, 2, 3]],
            BoundaryMarker::Dirichlet,
        )
        .unwrap();
        let m = Mesh::Triangle(mesh.clone());
        let b = ConstantsBundle::basic(1.0, 1.0, 0.0);
        let r = certify_2d(&mesh, &DiscreteField::zeros(&m), &b, GContribution::FullG, BoundConstantMode::Corrected)
            .unwrap();
        assert_eq!(r.status, Status::Inapplicable);
        let r = certify_semilinear(&m, &b, Theorem::Semilinear52, BoundConstantMode::Corrected).unwrap();
        assert_eq!(r.status, Status::Inapplicable);
    }

    #[test]
    fn semilinear_examples() {
        let m = Mesh::Interval(interval(2.0, 1));
        let b = ConstantsBundle::basic(1.0, 0.0, 1.0);
        let r51 = certify_semilinear(&m, &b, Theorem::Semilinear51, BoundConstantMode::Corrected).unwrap();
        let r52 = certify_semilinear(&m, &b, Theorem::Semilinear52, BoundConstantMode::Corrected).unwrap();
        assert!(!r51.global_pass);
        assert!(r52.global_pass);

        // Equilateral element at the non-strict boundary |T| = 6 cot(pi/3).
        let side = (4.0 * 6.0 / 3f64.sqrt() / 3f64.sqrt()).sqrt();
        let strip = equilateral_strip(1, 1, side, BoundaryMarker::Dirichlet);
        let area = triangle_geometry(strip.triangle_coords(0)).area;
        assert_relative_eq!(area, 6.0 / 3f64.sqrt(), epsilon = 1e-12);
        let r = certify_semilinear(&Mesh::Triangle(strip), &b, Theorem::Semilinear52, BoundConstantMode::Corrected)
            .unwrap();
        assert!(r.elements[0].margin.abs() < 1e-12);

        let zero = ConstantsBundle::basic(1.0, 0.0, 0.0);
        let big = Mesh::Interval(interval(100.0, 3));
        let r = certify_semilinear(&big, &zero, Theorem::Semilinear51, BoundConstantMode::Corrected).unwrap();
        assert!(r.global_pass);
    }

    #[test]
    fn dispatch_rejects_dimension_mismatch() {
        let m = Mesh::Interval(interval(1.0, 2));
        let b = ConstantsBundle::basic(1.0, 1.0, 0.0);
        let f = DiscreteField::zeros(&m);
        assert!(certify(Theorem::TwoD, &m, Some(&f), &b, BoundConstantMode::Corrected).is_err());
        assert!(certify(Theorem::OneD, &m, None, &b, BoundConstantMode::Corrected).is_err());
        assert!(certify(Theorem::OneD, &m, Some(&f), &b, BoundConstantMode::Corrected)
            .unwrap()
            .global_pass);
    }
}
