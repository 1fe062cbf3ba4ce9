//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; the process fails if any criterion fails.
//! Runtime limits are part of each criterion.

mod common;

use std::time::Instant;

use common::*;
use qcert::certificate::{
    certify_1d, certify_2d, certify_semilinear, stieltjes_check, BoundConstantMode, CertificateReport,
    GContribution, Status, Theorem,
};
use qcert::cli::{multistart, MultistartConfig};
use qcert::fem::{
    assemble_jacobian, assemble_residual, assemble_semilinear_system, basis_gradients, solve_newton,
    DiscreteField, FemOptions, NewtonConfig,
};
use qcert::mesh::{
    build_interval_mesh, equilateral_strip, refine_uniform, refine_uniform_mapped, triangle_geometry,
    unit_square_acute_refined, BoundaryMarker, EndCondition, Mesh, TriMesh2D,
};
use qcert::oracle::{abs_integral_bound, inverse_nonnegativity, lemma_audit, verify_pair, comparison_lhs, LemmaRecord};
use qcert::problem::{
    make_coefficient, validate_constants, CoefficientModel, ConstantsBundle, Params, Problem, Profile,
    Radial, SamplingBox, CATALOG,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LEMMA_TOL: f64 = 1e-10;
const PAIR_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: usize, title: &str, limit_s: f64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let secs = start.elapsed().as_secs_f64();
    let in_time = secs < limit_s;
    let pass = out.pass && in_time;
    println!(
        "criterion {id} [{}] {title}: {} ({secs:.2} s, limit {limit_s} s{})",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        if in_time { "" } else { ", over time" }
    );
    pass
}

fn opts() -> FemOptions {
    FemOptions::default()
}

fn params(kv: &[(&str, f64)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn random_free_field(mesh: &Mesh, rng: &mut impl Rng, amp: f64) -> DiscreteField {
    DiscreteField::from_fn(mesh, |_| rng.gen_range(-amp..=amp))
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut sum_err, mut gram_err, mut oracle_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut edge_violations = 0;
    let mut edge_excess = f64::NEG_INFINITY;
    let n = 10_000;
    for _ in 0..n {
        let p = random_acute_triangle(&mut rng, 0.05, 0.0);
        let g = triangle_geometry(p);
        let brute = brute_geometry(p);
        for i in 0..3 {
            oracle_err = oracle_err
                .max(rel_err(g.edge_lengths[i], brute.edges[i]))
                .max(rel_err(g.angles[i], brute.angles[i]));
        }
        oracle_err = oracle_err.max(rel_err(g.area, brute.area));
        let grads = basis_gradients(p, 0).unwrap();
        let norm = |v: [f64; 2]| v[0].hypot(v[1]);
        let scale = grads.iter().map(|&v| norm(v)).fold(0.0, f64::max);
        let s = [grads[0][0] + grads[1][0] + grads[2][0], grads[0][1] + grads[1][1] + grads[2][1]];
        sum_err = sum_err.max(norm(s) / scale);
        let four_t2 = 4.0 * g.area * g.area;
        for i in 0..3 {
            for j in 0..3 {
                let dot = grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1];
                let e = g.edge_lengths;
                let expected = if i == j {
                    e[i] * e[i] / four_t2
                } else {
                    let k = 3 - i - j;
                    -e[i] * e[j] * g.angles[k].cos() / four_t2
                };
                // Relative to |grad phi_i| |grad phi_j|, the natural size of the product.
                let size = norm(grads[i]) * norm(grads[j]);
                gram_err = gram_err.max((dot - expected).abs() / size);
                // Equality holds for the shortest/longest pair, so allow roundoff.
                let excess = ((g.r_t * e[i] - e[j]) / e[j]).max((e[j] - e[i] / g.r_t) / e[j]);
                edge_excess = edge_excess.max(excess);
                if excess > 1e-12 {
                    edge_violations += 1;
                }
            }
        }
    }
    let tol = 1e-12;
    Outcome {
        pass: sum_err <= tol && gram_err <= tol && oracle_err <= tol && edge_violations == 0,
        detail: format!(
            "{n} random acute triangles; gradient-sum rel err {sum_err:.1e}, Gram identities rel err {gram_err:.1e}, \
             geometry vs brute-force oracle {oracle_err:.1e} (tol {tol:.0e}); edge inequalities violated {edge_violations} times (max rel excess {edge_excess:.1e})"
        ),
    }
}

fn criterion_2() -> Outcome {
    let mesh = mixed_square(2, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let eps = 1e-6;
    let mut worst = (0.0f64, "");
    let mut count = 0;
    for name in CATALOG {
        let model = make_coefficient(name, &Params::new())
            .unwrap()
            .with_b(Profile::Polynomial(vec![0.0, 1.0, 0.0, 1.0]));
        for _ in 0..100 {
            let u = random_free_field(&mesh, &mut rng, 1.0);
            let d: Vec<f64> = (0..u.free_values().len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let jd = assemble_jacobian(&model, &mesh, &u, opts()).unwrap().matrix.matvec(&d);
            let (mut up, mut um) = (u.clone(), u.clone());
            up.add_free(&d, eps);
            um.add_free(&d, -eps);
            let rp = assemble_residual(&model, &mesh, &up, opts()).unwrap();
            let rm = assemble_residual(&model, &mesh, &um, opts()).unwrap();
            let scale = jd.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let err = jd
                .iter()
                .zip(rp.iter().zip(&rm))
                .map(|(j, (p, m))| (j - (p - m) / (2.0 * eps)).abs())
                .fold(0.0, f64::max)
                / scale;
            if err > worst.0 {
                worst = (err, name);
            }
            count += 1;
        }
    }
    Outcome {
        pass: worst.0 <= 1e-5,
        detail: format!(
            "{count} Jacobian-vector products over {} models; max rel diff to central differences {:.1e} ({}), tol 1e-5",
            CATALOG.len(),
            worst.0,
            worst.1
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 10_000;
    let (mut max_ratio, mut oracle_err) = (0.0f64, 0.0f64);
    let (mut corrected_fail, mut above_paper) = (0, 0);
    let paper = 7.0 / 6.0 * (1.0 - 1e-9);
    for _ in 0..n {
        let p = random_triangle(&mut rng);
        let mut w: [f64; 3];
        loop {
            w = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            if rng.gen_bool(0.2) {
                w[rng.gen_range(0..3)] = 0.0;
            }
            let (lo, hi) = w.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            if lo < 0.0 && hi > 0.0 {
                break;
            }
        }
        let mesh = single_triangle(p);
        let r = abs_integral_bound(&mesh, &w, 0, BoundConstantMode::Corrected).unwrap();
        oracle_err = oracle_err.max(rel_err(r.exact, abs_integral_oracle(p, w)));
        if r.exact > r.bound {
            corrected_fail += 1;
        }
        let ratio = r.exact / (r.bound / BoundConstantMode::Corrected.c_w());
        max_ratio = max_ratio.max(ratio);
        if ratio > paper {
            above_paper += 1;
        }
    }
    Outcome {
        pass: corrected_fail == 0 && oracle_err <= 1e-12,
        detail: format!(
            "{n} sign-changing elements; (4/3) bound violated {corrected_fail} times; exact vs clipping oracle rel err {oracle_err:.1e}; \
             max int|w| / (delta |T|) = {max_ratio:.4}; elements above 7/6: {above_paper}"
        ),
    }
}

struct LemmaCase {
    name: &'static str,
    model: CoefficientModel,
    bundle: ConstantsBundle,
    g: GContribution,
}

fn lemma_cases() -> Vec<LemmaCase> {
    let tanh_a0 = Profile::Tanh {
        base: 2.0,
        amp: 1.0,
        scale: 1.0,
    };
    let arctan = make_coefficient("arctan", &params(&[("weight", 0.2)])).unwrap().with_a0(tanh_a0);
    let arctan_cf = Radial::Arctan.growth_bound().unwrap();
    let glacier = make_coefficient("glacier", &params(&[("a0", 1.0)]))
        .unwrap()
        .with_b(Profile::Tanh {
            base: 0.0,
            amp: 1.0,
            scale: 1.0,
        });
    let glacier_cf = Radial::Glacier { k0: 1.0 }.growth_bound().unwrap();
    let plap = make_coefficient("p_laplacian", &params(&[("a0", 1.0), ("p", 2.2)])).unwrap();
    vec![
        LemmaCase {
            name: "A=1",
            model: CoefficientModel::laplace(),
            bundle: ConstantsBundle::basic(1.0, 0.0, 0.0),
            g: GContribution::FullG,
        },
        LemmaCase {
            name: "arctan",
            model: arctan,
            bundle: ConstantsBundle {
                lambda0: 1.0,
                lambda1: 0.2,
                c_f: arctan_cf,
                ..ConstantsBundle::basic(1.0 - 0.2 * arctan_cf, 1.0, 0.0)
            },
            g: GContribution::FullG,
        },
        LemmaCase {
            name: "glacier",
            model: glacier,
            bundle: ConstantsBundle {
                lambda0: 1.0,
                lambda1: 1.0,
                c_f: glacier_cf,
                ..ConstantsBundle::basic(1.0 - glacier_cf, 0.0, 1.0)
            },
            g: GContribution::FullG,
        },
        LemmaCase {
            name: "p_laplacian",
            model: plap,
            bundle: ConstantsBundle {
                lambda2: 1.0,
                c_g_hat: Some(0.2 + 1e-12),
                ..ConstantsBundle::basic(1.0, 0.0, 0.0)
            },
            g: GContribution::RelativeG,
        },
    ]
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mesh = mixed_square(1, 1.0);
    let sampling = SamplingBox {
        samples: 20_000,
        seed: 4,
        ..SamplingBox::default()
    };
    let (mut elements, mut verbatim_fail, mut corrected_fail, mut eta_b_fail, mut nonpositive_p) = (0, 0, 0, 0, 0);
    let mut worst_verbatim = f64::INFINITY;
    let mut notes = Vec::new();
    for case in lemma_cases() {
        let validation = validate_constants(&case.model, &case.bundle, &sampling);
        if !validation.passed() {
            notes.push(format!("{} bundle failed validation", case.name));
        }
        for pair in 0..100 {
            let psi = rng.gen_range(0.2..1.0);
            let m = mesh.with_neumann_psi(psi);
            let u2 = solve_newton(&case.model, &m, &NewtonConfig::default(), &DiscreteField::zeros(&m), opts())
                .unwrap()
                .field;
            let amp = rng.gen_range(0.01..0.5);
            let u1 = if pair % 2 == 0 {
                let noise = random_free_field(&m, &mut rng, amp);
                u2.combine(1.0, &noise, 1.0)
            } else {
                // One raised vertex, everything else lowered.
                let free: Vec<usize> = (0..m.num_vertices()).filter(|&a| !m.dirichlet_mask()[a]).collect();
                let spike = free[rng.gen_range(0..free.len())];
                u2.map(|v, x| if v == spike { x + amp } else { x - amp * rng_like(v, pair) })
            };
            let audit = |mode| -> Vec<LemmaRecord> {
                lemma_audit(&case.model, &m, &u1, &u2, &case.bundle, mode, case.g, opts()).unwrap()
            };
            let paper = audit(BoundConstantMode::Paper);
            let corrected = audit(BoundConstantMode::Corrected);
            for (p, c) in paper.iter().zip(&corrected) {
                elements += 1;
                if c.p_t <= 0.0 {
                    nonpositive_p += 1;
                }
                worst_verbatim = worst_verbatim.min(p.principal_lhs - p.principal_rhs);
                if !p.principal_holds(LEMMA_TOL) {
                    verbatim_fail += 1;
                }
                if !c.principal_holds(LEMMA_TOL) {
                    corrected_fail += 1;
                }
                if !(c.eta_holds(LEMMA_TOL) && c.b_holds(LEMMA_TOL)) {
                    eta_b_fail += 1;
                }
            }
        }
    }
    Outcome {
        pass: verbatim_fail == 0 && eta_b_fail == 0 && nonpositive_p == 0 && notes.is_empty(),
        detail: format!(
            "4 models x 100 pairs, {elements} sign-change elements; principal bound with gamma_a/r_T violated on {verbatim_fail} \
             (worst lhs-rhs {worst_verbatim:.3e}); with gamma_a*r_T violated on {corrected_fail}; eta/b terms (4/3) violated on \
             {eta_b_fail}; p_T <= 0 on {nonpositive_p}{}",
            if notes.is_empty() { String::new() } else { format!("; {}", notes.join(", ")) }
        ),
    }
}

/// Deterministic pseudo-random factor in `[0.5, 1.5)` per vertex and pair.
fn rng_like(v: usize, pair: usize) -> f64 {
    let mut r = ChaCha8Rng::seed_from_u64((pair as u64) << 32 | v as u64);
    r.gen_range(0.5..1.5)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_excess, mut worst_lhs) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let (mut pair_fail, mut uncertified) = (0, 0);
    let n = 50;
    let model_a = Profile::Tanh {
        base: 2.0,
        amp: 1.0,
        scale: 1.0,
    };
    for _ in 0..n {
        let nodes_n = rng.gen_range(3..30);
        let length = rng.gen_range(0.5..2.0);
        let steps: Vec<f64> = (0..nodes_n).map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = steps.iter().sum();
        let mut nodes = vec![0.0];
        for s in &steps {
            nodes.push(nodes.last().unwrap() + length * s / total);
        }
        *nodes.last_mut().unwrap() = length;
        let right = if rng.gen_bool(0.5) {
            EndCondition::dirichlet()
        } else {
            EndCondition::neumann(rng.gen_range(-2.0..2.0))
        };
        let beta = rng.gen_range(0.0..3.0);
        let f0 = rng.gen_range(-2.0..2.0);
        let shift = rng.gen_range(0.01..1.0);
        let b = Profile::affine(f0, beta);
        let model = CoefficientModel::new("tanh-a0", model_a.clone()).with_b(b.clone());
        let sub = model.clone().with_b(b.shifted(shift));
        let sup = model.clone().with_b(b.shifted(-shift));
        let bundle = ConstantsBundle::basic(1.0, 1.0, beta);

        let mut mesh = Mesh::Interval(build_interval_mesh(nodes, EndCondition::dirichlet(), right).unwrap());
        let mut certified = None;
        for _ in 0..8 {
            let zero = DiscreteField::zeros(&mesh);
            let u1 = solve_newton(&sub, &mesh, &NewtonConfig::default(), &zero, opts()).unwrap();
            let u2 = solve_newton(&sup, &mesh, &NewtonConfig::default(), &zero, opts()).unwrap();
            let report = certify_1d(mesh.as_interval().unwrap(), &u2.field, &bundle).unwrap();
            if u1.converged && u2.converged && report.global_pass {
                certified = Some((u1.field, u2.field));
                break;
            }
            mesh = refine_uniform(&mesh);
        }
        let Some((u1, u2)) = certified else {
            uncertified += 1;
            continue;
        };
        let v = verify_pair(&model, &mesh, &u1, &u2, PAIR_TOL, opts()).unwrap();
        if !(v.is_subsolution && v.is_supersolution && v.comparison_holds) {
            pair_fail += 1;
        }
        worst_excess = worst_excess.max(v.max_excess);
        worst_lhs = worst_lhs.max(comparison_lhs(&model, &mesh, &u1, &u2, opts()).unwrap());
    }
    Outcome {
        pass: pair_fail == 0 && uncertified == 0 && worst_excess <= PAIR_TOL,
        detail: format!(
            "{n} shifted-b pairs on random 1D meshes; condition met on {} meshes; pair/ordering failures {pair_fail}; \
             max(u1 - u2) = {worst_excess:.2e} (tol 1e-10); max comparison integral {worst_lhs:.1e}",
            n - uncertified
        ),
    }
}

fn criterion_6() -> Outcome {
    let bundle = ConstantsBundle::basic(1.0, 1.0, 0.0);
    let mut problem = Problem::new(tanh_model());
    problem.constants = Some(bundle.clone());
    let mut mesh = mixed_square(0, 1.0);
    let mut u0 = DiscreteField::zeros(&mesh);
    let mut certified_level = None;
    let mut last: Option<CertificateReport> = None;
    for level in 0..=6 {
        let s = solve_newton(&problem.model, &mesh, &NewtonConfig::default(), &u0, opts()).unwrap();
        let r = certify_2d(
            mesh.as_triangle().unwrap(),
            &s.field,
            &bundle,
            GContribution::FullG,
            BoundConstantMode::Corrected,
        )
        .unwrap();
        let pass = r.global_pass;
        last = Some(r);
        if pass {
            certified_level = Some(level);
            break;
        }
        let (fine, map) = refine_uniform_mapped(&mesh);
        u0 = DiscreteField::new(&fine, map.prolongate(s.field.values())).unwrap();
        mesh = fine;
    }
    let Some(level) = certified_level else {
        return Outcome {
            pass: false,
            detail: format!(
                "certificate never passed; last worst margin {:?}",
                last.and_then(|r| r.worst_margin())
            ),
        };
    };
    let config = MultistartConfig {
        starts: 10,
        seed: 6,
        box_half_width: 1.0,
        newton: NewtonConfig::default(),
        theorem: Theorem::TwoD,
        mode: BoundConstantMode::Corrected,
        cluster_tol: 1e-8,
    };
    let r = multistart(&problem, &mesh, &config).unwrap();
    let max_diff = r.max_pairwise_difference.unwrap_or(f64::INFINITY);
    Outcome {
        pass: r.converged == 10 && r.clusters == 1 && max_diff <= 1e-8,
        detail: format!(
            "corrected certificate passes after {level} refinements ({} elements, worst margin {:.4}); \
             multistart: {}/10 converged, {} cluster(s), max pairwise diff {max_diff:.1e}, conclusion {:?}",
            mesh.num_elements(),
            last.and_then(|r| r.worst_margin()).unwrap_or(f64::NAN),
            r.converged,
            r.clusters,
            r.conclusion
        ),
    }
}

fn semilinear_meshes() -> Vec<(String, Mesh)> {
    let mut out: Vec<(String, Mesh)> = Vec::new();
    for level in 0..3 {
        out.push((format!("square L{level}"), unit_square_acute_refined(level, BoundaryMarker::Dirichlet).into()));
    }
    for level in 0..2 {
        out.push((format!("mixed square L{level}"), mixed_square(level, 0.0)));
    }
    for scale in [2.0, 4.0, 6.0] {
        let m = unit_square_acute_refined(1, BoundaryMarker::Dirichlet)
            .map_vertices(|p| [scale * p[0], scale * p[1]])
            .unwrap();
        out.push((format!("square x{scale}"), m.into()));
    }
    for side in [0.5, 1.0, 2.0, 2.8, 3.5] {
        out.push((format!("strip side {side}"), equilateral_strip(6, 4, side, BoundaryMarker::Dirichlet).into()));
    }
    out
}

/// Largest `B` on a geometric grid refined by bisection for which the
/// semilinear certificate passes.
fn threshold(mesh: &Mesh, theorem: Theorem, mode: BoundConstantMode) -> f64 {
    let passes = |b: f64| {
        certify_semilinear(mesh, &ConstantsBundle::basic(1.0, 0.0, b), theorem, mode)
            .unwrap()
            .global_pass
    };
    let (mut lo, mut hi) = (1e-8, 1e8);
    assert!(passes(lo) && !passes(hi));
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if passes(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn criterion_7() -> Outcome {
    let model = CoefficientModel::laplace().with_b(Profile::affine(0.0, 1.0));
    let bundle = ConstantsBundle::basic(1.0, 0.0, 1.0);
    let (mut systems, mut failures, mut skipped) = (0, Vec::new(), Vec::new());
    let mut min_inverse = f64::INFINITY;
    for (name, mesh) in semilinear_meshes() {
        let cert = certify_semilinear(&mesh, &bundle, Theorem::Semilinear52, BoundConstantMode::Corrected).unwrap();
        if !cert.global_pass {
            skipped.push(name);
            continue;
        }
        let u = DiscreteField::zeros(&mesh);
        let a = assemble_semilinear_system(&model, &mesh, &u, &u, opts()).unwrap().matrix();
        if a.dim() > 200 {
            skipped.push(name);
            continue;
        }
        systems += 1;
        let st = stieltjes_check(&a);
        let inv = inverse_nonnegativity(&a, 200).unwrap();
        min_inverse = min_inverse.min(inv.min_entry);
        if !st.is_stieltjes || inv.min_entry < -1e-10 {
            failures.push(name);
        }
    }

    // Threshold ordering on parametric sweeps.
    let mut ratio_err = 0.0f64;
    let mut implication_fail = 0;
    let mut sweeps = 0;
    let mut meshes_2d: Vec<Mesh> = semilinear_meshes().into_iter().map(|(_, m)| m).collect();
    meshes_2d.retain(|m| m.dim() == 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let meshes_1d: Vec<Mesh> = (0..5)
        .map(|_| {
            let mut nodes = vec![0.0];
            for _ in 0..rng.gen_range(2..12) {
                nodes.push(nodes.last().unwrap() + rng.gen_range(0.05..1.0));
            }
            Mesh::Interval(build_interval_mesh(nodes, EndCondition::dirichlet(), EndCondition::neumann(0.0)).unwrap())
        })
        .collect();
    for mesh in meshes_2d.iter().chain(&meshes_1d) {
        for mode in [BoundConstantMode::Corrected, BoundConstantMode::Paper] {
            sweeps += 1;
            let t51 = threshold(mesh, Theorem::Semilinear51, mode);
            let t52 = threshold(mesh, Theorem::Semilinear52, mode);
            // 2D: min cot / (2 C_w B |T|) against 6 min cot / (B |T|); 1D: 2/B against 6/B.
            let expected = if mesh.dim() == 1 { 3.0 } else { 12.0 * mode.c_w() };
            ratio_err = ratio_err.max(rel_err(t52 / t51, expected));
            for k in 0..60 {
                let b = 10f64.powf(-3.0 + 8.0 * k as f64 / 59.0);
                let bb = ConstantsBundle::basic(1.0, 0.0, b);
                let p51 = certify_semilinear(mesh, &bb, Theorem::Semilinear51, mode).unwrap().global_pass;
                let p52 = certify_semilinear(mesh, &bb, Theorem::Semilinear52, mode).unwrap().global_pass;
                if p51 && !p52 {
                    implication_fail += 1;
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty() && systems > 0 && ratio_err <= 1e-9 && implication_fail == 0,
        detail: format!(
            "{systems} systems meeting the mesh condition (<= 200 dofs), Stieltjes/inverse failures {:?}, min inverse entry {min_inverse:.2e}; \
             not assembled: {skipped:?}; {sweeps} sweeps: threshold ratio rel err {ratio_err:.1e} (expect 3 in 1D, 14 paper / 16 corrected in 2D), \
             strict-pass-without-Stieltjes-pass {implication_fail}",
            failures
        ),
    }
}

fn margins(r: &CertificateReport) -> Vec<f64> {
    r.elements.iter().map(|e| e.margin).collect()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut violations: Vec<String> = Vec::new();
    let n = 100;
    for cfg in 0..n {
        let level = cfg % 2;
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let scale = rng.gen_range(0.3..3.0);
        let shift = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let base = unit_square_acute_refined(level, BoundaryMarker::Dirichlet)
            .remark_boundary(|_, a, b| {
                if a[1] == 0.0 && b[1] == 0.0 {
                    (BoundaryMarker::Dirichlet, 0.0)
                } else {
                    (BoundaryMarker::Neumann, 0.0)
                }
            })
            .unwrap();
        let mesh = Mesh::Triangle(base.clone());
        let amp = rng.gen_range(0.01..0.4);
        let (kx, ky) = (rng.gen_range(0.5..4.0), rng.gen_range(0.5..4.0));
        let field = DiscreteField::from_fn(&mesh, |p| amp * (kx * p[0] + ky * p[1]).sin());
        let gamma = rng.gen_range(0.5..2.0);
        let k = rng.gen_range(0.0..2.0);
        let b = rng.gen_range(0.0..2.0);
        let mode = if rng.gen_bool(0.5) {
            BoundConstantMode::Corrected
        } else {
            BoundConstantMode::Paper
        };
        let tri = mesh.as_triangle().unwrap();
        let cert = |m: &TriMesh2D, f: &DiscreteField, k: f64, b: f64| {
            certify_2d(m, f, &ConstantsBundle::basic(gamma, k, b), GContribution::FullG, mode).unwrap()
        };
        let r0 = cert(tri, &field, k, b);
        if r0.status == Status::Inapplicable {
            violations.push(format!("cfg {cfg}: inapplicable"));
            continue;
        }
        // pass <=> margin > 0; global <=> all; worst is the minimum.
        let all = r0.elements.iter().all(|e| e.pass == (e.margin > 0.0));
        let global = r0.global_pass == r0.elements.iter().all(|e| e.pass);
        let min = margins(&r0).into_iter().fold(f64::INFINITY, f64::min);
        if !(all && global && r0.worst_margin() == Some(min)) {
            violations.push(format!("cfg {cfg}: report consistency"));
        }
        // Monotone in K_eta, B_eta and delta_T(u).
        let bigger = [
            cert(tri, &field, k + rng.gen_range(0.01..1.0), b),
            cert(tri, &field, k, b + rng.gen_range(0.01..1.0)),
            cert(tri, &field.map(|_, x| 1.7 * x), k, b),
        ];
        for (what, r) in ["K_eta", "B_eta", "delta"].iter().zip(&bigger) {
            let worse = r0
                .elements
                .iter()
                .zip(&r.elements)
                .all(|(a, c)| c.margin <= a.margin && (a.pass || !c.pass));
            if !worse {
                violations.push(format!("cfg {cfg}: not monotone in {what}"));
            }
        }
        // Rigid motion and uniform scaling with B_eta = 0.
        let moved = base
            .map_vertices(|p| {
                let (s, c) = phi.sin_cos();
                [shift[0] + scale * (c * p[0] - s * p[1]), shift[1] + scale * (s * p[0] + c * p[1])]
            })
            .unwrap();
        let moved_field = DiscreteField::new(&Mesh::Triangle(moved.clone()), field.values().to_vec()).unwrap();
        let (a, c) = (cert(tri, &field, k, 0.0), cert(&moved, &moved_field, k, 0.0));
        let drift = margins(&a)
            .iter()
            .zip(margins(&c))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if drift > 1e-12 {
            violations.push(format!("cfg {cfg}: rigid motion changed margins by {drift:.1e}"));
        }
        // Red refinement with B_eta = 0 and interpolated field.
        let (fine, map) = refine_uniform_mapped(&mesh);
        let fine_field = DiscreteField::new(&fine, map.prolongate(field.values())).unwrap();
        let rf = cert(fine.as_triangle().unwrap(), &fine_field, k, 0.0);
        for (e, parent) in a.elements.iter().enumerate() {
            for child in &rf.elements[4 * e..4 * e + 4] {
                if child.delta_u.unwrap() > parent.delta_u.unwrap() + 1e-15 || (parent.pass && !child.pass) {
                    violations.push(format!("cfg {cfg}: child of element {e} worse than parent"));
                }
            }
        }
        // The strict semilinear condition implies the Stieltjes one.
        let sb = ConstantsBundle::basic(gamma, 0.0, 10f64.powf(rng.gen_range(-1.0..3.0)));
        let s51 = certify_semilinear(&mesh, &sb, Theorem::Semilinear51, mode).unwrap();
        let s52 = certify_semilinear(&mesh, &sb, Theorem::Semilinear52, mode).unwrap();
        if s51.global_pass && !s52.global_pass {
            violations.push(format!("cfg {cfg}: semilinear implication"));
        }
    }
    Outcome {
        pass: violations.is_empty(),
        detail: format!(
            "{n} configurations (report consistency, monotonicity in K_eta/B_eta/delta, rigid-motion invariance, red refinement, \
             strict => Stieltjes condition); violations: {}",
            if violations.is_empty() { "none".to_string() } else { violations.join("; ") }
        ),
    }
}

fn main() {
    let results = [
        run(1, "geometry suite", 5.0, criterion_1),
        run(2, "Jacobian consistency", 60.0, criterion_2),
        run(3, "|w| bound audit", 5.0, criterion_3),
        run(4, "lemma suite", 120.0, criterion_4),
        run(5, "1D comparison theorem", 30.0, criterion_5),
        run(6, "2D uniqueness experiment", 120.0, criterion_6),
        run(7, "semilinear Stieltjes", 30.0, criterion_7),
        run(8, "certificate monotonicity and refinement", 10.0, criterion_8),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
