//! Empirical uniqueness: Newton from random initial fields, clustering of
//! the converged solutions and a certificate on each.
//!
//! cargo run --example multistart [-- starts seed]

use qcert::certificate::BoundConstantMode;
use qcert::cli::{default_theorem, multistart, MultistartConfig};
use qcert::fem::NewtonConfig;
use qcert::mesh::{load_mesh, refine_uniform};
use qcert::problem::load_problem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let starts = args.next().map_or(Ok(10), |s| s.parse())?;
    let seed = args.next().map_or(Ok(0), |s| s.parse())?;
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let problem = load_problem(format!("{data}/tanh.toml"))?;
    let coarse = load_mesh(format!("{data}/square_mixed.mesh"))?;

    for (label, mesh) in [
        ("coarse", coarse.clone()),
        ("4x refined", (0..4).fold(coarse, |m, _| refine_uniform(&m))),
    ] {
        let config = MultistartConfig {
            starts,
            seed,
            box_half_width: 1.0,
            newton: NewtonConfig::default(),
            theorem: default_theorem(&problem, &mesh),
            mode: BoundConstantMode::Corrected,
            cluster_tol: 1e-8,
        };
        let r = multistart(&problem, &mesh, &config)?;
        println!(
            "{label:<11} converged {}/{}  clusters {}  max pairwise diff {:.2e}  conclusion {:?}",
            r.converged,
            r.starts,
            r.clusters,
            r.max_pairwise_difference.unwrap_or(f64::NAN),
            r.conclusion
        );
    }
    Ok(())
}
