//! Two-dimensional certificate for A = 2 + tanh(u): solve on successively
//! refined acute meshes until every element margin is positive, then print
//! the governing element and compare the two bound-constant modes.

use qcert::certificate::{certify_2d, BoundConstantMode, GContribution};
use qcert::fem::{solve_newton, DiscreteField, FemOptions, NewtonConfig};
use qcert::mesh::{load_mesh, refine_uniform_mapped, Mesh};
use qcert::problem::load_problem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let problem = load_problem(format!("{data}/tanh.toml"))?;
    let bundle = problem.constants.clone().expect("tanh.toml carries constants");
    let mut mesh = problem.apply_boundary(&load_mesh(format!("{data}/square_mixed.mesh"))?);
    let mut u0 = DiscreteField::zeros(&mesh);

    println!("level  elements  worst margin (corrected)  worst margin (paper)");
    for level in 0..6 {
        let s = solve_newton(&problem.model, &mesh, &NewtonConfig::default(), &u0, FemOptions::default())?;
        let Mesh::Triangle(tri) = &mesh else {
            unreachable!()
        };
        let corrected = certify_2d(tri, &s.field, &bundle, GContribution::FullG, BoundConstantMode::Corrected)?;
        let paper = certify_2d(tri, &s.field, &bundle, GContribution::FullG, BoundConstantMode::Paper)?;
        println!(
            "{level:5} {:9} {:25.6} {:21.6}",
            mesh.num_elements(),
            corrected.worst_margin().unwrap_or(f64::NAN),
            paper.worst_margin().unwrap_or(f64::NAN)
        );
        if corrected.global_pass {
            let w = corrected.worst.expect("nonempty mesh");
            let e = &corrected.elements[w.id];
            println!("\ncertified at level {level}; governing element {}:", w.id);
            println!("{}", serde_json::to_string_pretty(e)?);
            return Ok(());
        }
        let (fine, map) = refine_uniform_mapped(&mesh);
        u0 = DiscreteField::new(&fine, map.prolongate(s.field.values()))?;
        mesh = fine;
    }
    println!("no level passed");
    Ok(())
}
