//! Damped Newton for -div((2 + tanh u) grad u) = 0 with a unit Neumann flux
//! on three sides of the unit square, followed by a residual check and a
//! round trip through the solution file format.

use qcert::fem::{assemble_residual, parse_field, solve_newton, write_field, DiscreteField, FemOptions, NewtonConfig};
use qcert::mesh::load_mesh;
use qcert::problem::load_problem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let problem = load_problem(format!("{data}/tanh.toml"))?;
    let mesh = problem.apply_boundary(&load_mesh(format!("{data}/square_mixed.mesh"))?);
    let opts = FemOptions {
        quadrature_degree: problem.quadrature_degree,
    };

    let u0 = DiscreteField::zeros(&mesh);
    let s = solve_newton(&problem.model, &mesh, &NewtonConfig::default(), &u0, opts)?;
    println!("iteration  step      residual");
    println!("{:9} {:>5} {:13.3e}", 0, "-", s.initial_residual_norm);
    for (k, rec) in s.history.iter().enumerate() {
        println!("{:9} {:5.3} {:13.3e}", k + 1, rec.step, rec.residual_norm);
    }
    println!("converged: {}", s.converged);

    let r = assemble_residual(&problem.model, &mesh, &s.field, opts)?;
    let max_r = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    println!("max |residual entry| = {max_r:.2e}");
    let (lo, hi) = s
        .field
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    println!("solution range [{lo:.6}, {hi:.6}]");

    let text = write_field(&s.field);
    assert_eq!(parse_field(&text)?, s.field.values());
    println!("solution file: {} lines", text.lines().count());
    Ok(())
}
