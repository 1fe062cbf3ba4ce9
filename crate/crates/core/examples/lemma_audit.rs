//! Brute-force audit of the element estimates behind the 2D certificate.
//!
//! For a sign-changing difference w = u1 - u2, every element where the
//! indicator test function is non-constant gets its three integrals
//! evaluated by quadrature and compared with the claimed lower bounds. The
//! principal-term bound with `gamma_a / r_T` fails for A = 1 when w is a
//! single spike; the `gamma_a * r_T` version holds.

use qcert::certificate::{BoundConstantMode, GContribution};
use qcert::cli::lemma_csv;
use qcert::fem::{solve_newton, DiscreteField, FemOptions, NewtonConfig};
use qcert::mesh::{unit_square_acute_refined, BoundaryMarker, Mesh};
use qcert::oracle::{lemma_audit, PAIR_TOL};
use qcert::problem::{CoefficientModel, ConstantsBundle, Profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh: Mesh = unit_square_acute_refined(1, BoundaryMarker::Dirichlet)
        .remark_boundary(|_, a, b| {
            if a[1] == 0.0 && b[1] == 0.0 {
                (BoundaryMarker::Dirichlet, 0.0)
            } else {
                (BoundaryMarker::Neumann, 1.0)
            }
        })?
        .into();
    let model = CoefficientModel::new("tanh", Profile::Tanh {
        base: 2.0,
        amp: 1.0,
        scale: 1.0,
    });
    let bundle = ConstantsBundle::basic(1.0, 1.0, 0.0);
    let opts = FemOptions::default();
    let u2 = solve_newton(&model, &mesh, &NewtonConfig::default(), &DiscreteField::zeros(&mesh), opts)?.field;
    // An oscillating perturbation makes w change sign on many elements.
    let u1 = u2.map(|v, x| {
        let p = mesh.point(v);
        x + 0.05 * (7.0 * p[0] + 3.0 * p[1]).sin()
    });

    for mode in [BoundConstantMode::Corrected, BoundConstantMode::Paper] {
        let recs = lemma_audit(&model, &mesh, &u1, &u2, &bundle, mode, GContribution::FullG, opts)?;
        let principal = recs.iter().filter(|r| !r.principal_holds(PAIR_TOL)).count();
        let eta = recs.iter().filter(|r| !r.eta_holds(PAIR_TOL)).count();
        let b = recs.iter().filter(|r| !r.b_holds(PAIR_TOL)).count();
        println!(
            "{mode:?}: {} sign-change elements, violations principal={principal} eta={eta} b={b}",
            recs.len()
        );
        if mode == BoundConstantMode::Corrected {
            let csv = lemma_csv(&recs, PAIR_TOL);
            for line in csv.lines().take(6) {
                println!("  {line}");
            }
        }
    }

    // w = 1 at one free vertex and -1 at every other free vertex.
    let laplace = CoefficientModel::laplace();
    let unit = ConstantsBundle::basic(1.0, 0.0, 0.0);
    let zero = DiscreteField::zeros(&mesh);
    let spike_at = (0..mesh.num_vertices())
        .find(|&v| !mesh.dirichlet_mask()[v])
        .expect("mesh has free vertices");
    let spike = zero.map(|v, _| if v == spike_at { 1.0 } else { -1.0 });
    println!("
A = 1, spike at vertex {spike_at}:");
    for mode in [BoundConstantMode::Corrected, BoundConstantMode::Paper] {
        let recs = lemma_audit(&laplace, &mesh, &spike, &zero, &unit, mode, GContribution::FullG, opts)?;
        let worst = recs
            .iter()
            .map(|r| r.principal_lhs - r.principal_rhs)
            .fold(f64::INFINITY, f64::min);
        let failed = recs.iter().filter(|r| !r.principal_holds(PAIR_TOL)).count();
        println!("{mode:?}: principal violations {failed}/{}, min(lhs - rhs) = {worst:+.3e}", recs.len());
    }
    Ok(())
}
