//! Solve-and-certify across red refinements. Each level reports the
//! certificate of the interpolated coarse solution and of the re-solved
//! one.

use qcert::certificate::{BoundConstantMode, Theorem};
use qcert::cli::pipeline;
use qcert::fem::NewtonConfig;
use qcert::mesh::load_mesh;
use qcert::problem::load_problem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let runs = [
        ("tanh.toml", "square_mixed.mesh", Theorem::TwoD, 4),
        ("semilinear.toml", "square_dirichlet.mesh", Theorem::Semilinear52, 2),
    ];
    for (problem, mesh, theorem, refinements) in runs {
        let problem = load_problem(format!("{data}/{problem}"))?;
        let mesh = load_mesh(format!("{data}/{mesh}"))?;
        let r = pipeline(
            &problem,
            &mesh,
            theorem,
            refinements,
            &NewtonConfig::default(),
            BoundConstantMode::Corrected,
        )?;
        println!("{}:", theorem.name());
        println!("level  elements  interpolated  re-solved   status");
        for l in &r.levels {
            let interp = l.interpolated.as_ref().and_then(|c| c.worst_margin);
            println!(
                "{:5} {:9} {:>13} {:10.5}   {:?}",
                l.level,
                l.elements,
                interp.map_or("-".to_string(), |m| format!("{m:.5}")),
                l.resolved.worst_margin.unwrap_or(f64::NAN),
                l.resolved.status
            );
        }
        println!("first passing level: {:?}\n", r.first_pass_level);
    }
    Ok(())
}
