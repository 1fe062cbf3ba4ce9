//! Semilinear problem -lap u + b(u) = 0 with b = u: the linearised operator
//! S + M is a Stieltjes matrix on fine enough acute meshes, so its inverse
//! is entrywise nonnegative. Both semilinear mesh conditions are reported
//! next to the matrix checks.

use qcert::certificate::{certify_semilinear, stieltjes_check, BoundConstantMode, Theorem};
use qcert::fem::{assemble_semilinear_system, DiscreteField, FemOptions};
use qcert::mesh::{equilateral_strip, refine_uniform, unit_square_acute, BoundaryMarker, Mesh};
use qcert::oracle::{inverse_nonnegativity, DENSE_LIMIT};
use qcert::problem::{CoefficientModel, ConstantsBundle, Profile};

fn report(name: &str, mesh: &Mesh, b_eta: f64) -> Result<(), Box<dyn std::error::Error>> {
    let model = CoefficientModel::laplace().with_b(Profile::affine(0.0, b_eta));
    let bundle = ConstantsBundle::basic(1.0, 0.0, b_eta);
    let u = DiscreteField::zeros(mesh);
    let sys = assemble_semilinear_system(&model, mesh, &u, &u, FemOptions::default())?;
    let a = sys.matrix();
    let st = stieltjes_check(&a);
    let inv = inverse_nonnegativity(&a, DENSE_LIMIT)?;
    let c51 = certify_semilinear(mesh, &bundle, Theorem::Semilinear51, BoundConstantMode::Corrected)?;
    let c52 = certify_semilinear(mesh, &bundle, Theorem::Semilinear52, BoundConstantMode::Corrected)?;
    println!(
        "{name:<22} B={b_eta:<6} dofs={:<4} stieltjes={:<5} min(A^-1)={:+.2e}  strict={:?} ({:+.3})  stieltjes-cond={:?} ({:+.3})",
        a.dim(),
        st.is_stieltjes,
        inv.min_entry,
        c51.status,
        c51.worst_margin().unwrap_or(f64::NAN),
        c52.status,
        c52.worst_margin().unwrap_or(f64::NAN),
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let square: Mesh = unit_square_acute(BoundaryMarker::Dirichlet).into();
    let fine = refine_uniform(&refine_uniform(&square));
    for b in [1.0, 50.0, 500.0, 5000.0] {
        report("square, 2 refinements", &fine, b)?;
    }
    let strip: Mesh = equilateral_strip(6, 4, 0.25, BoundaryMarker::Dirichlet).into();
    // Equilateral: min cot = 1/sqrt(3), |T| = sqrt(3)/64, so the
    // Stieltjes condition holds up to B = 6 cot / |T| = 128.
    for b in [100.0, 120.0, 160.0] {
        report("equilateral strip", &strip, b)?;
    }
    Ok(())
}
