//! One-dimensional comparison condition: per-interval margins for a solved
//! problem, and how the margin reacts to the mesh size when b depends on u.

use qcert::certificate::certify_1d;
use qcert::fem::{solve_newton, DiscreteField, FemOptions, NewtonConfig};
use qcert::mesh::{uniform_interval_mesh, EndCondition, Mesh};
use qcert::problem::{CoefficientModel, ConstantsBundle, Profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A = 2 + tanh(u), b = 4u - 1.
    let model = CoefficientModel::new("tanh-reaction", Profile::Tanh {
        base: 2.0,
        amp: 1.0,
        scale: 1.0,
    })
    .with_b(Profile::affine(-1.0, 4.0));
    let bundle = ConstantsBundle::basic(1.0, 1.0, 4.0);

    println!("    n      max |du|     worst margin  status");
    for n in [2, 4, 8, 16, 32] {
        let m1 = uniform_interval_mesh(0.0, 1.0, n, EndCondition::dirichlet(), EndCondition::neumann(2.0))?;
        let mesh = Mesh::Interval(m1.clone());
        let u0 = DiscreteField::zeros(&mesh);
        let s = solve_newton(&model, &mesh, &NewtonConfig::default(), &u0, FemOptions::default())?;
        let report = certify_1d(&m1, &s.field, &bundle)?;
        let max_du = report
            .elements
            .iter()
            .filter_map(|e| e.delta_u)
            .fold(0.0, f64::max);
        println!(
            "{n:5} {max_du:13.6} {:16.6}  {:?}",
            report.worst_margin().unwrap_or(f64::NAN),
            report.status
        );
    }

    // K_eta = 0 with B_eta > 0: the condition has no finite threshold.
    let m1 = uniform_interval_mesh(0.0, 1.0, 4, EndCondition::dirichlet(), EndCondition::dirichlet())?;
    let u = DiscreteField::zeros(&Mesh::Interval(m1.clone()));
    let r = certify_1d(&m1, &u, &ConstantsBundle::basic(1.0, 0.0, 1.0))?;
    println!("\nK_eta = 0, B_eta = 1: {:?} ({})", r.status, r.reason.unwrap_or_default());
    Ok(())
}
