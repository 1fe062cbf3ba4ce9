//! Multi-start and refinement experiments built from the solver and the
//! certificate engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::CliError;
use crate::certificate::{certify, BoundConstantMode, CertificateReport, Status, Theorem};
use crate::fem::{solve_newton, DiscreteField, FemOptions, NewtonConfig};
use crate::mesh::{refine_uniform_mapped, Mesh};
use crate::problem::{estimate_constants, ConstantsBundle, GMode, Problem};

/// The quasilinear theorem matching the mesh dimension and the `g` mode.
pub fn default_theorem(problem: &Problem, mesh: &Mesh) -> Theorem {
    match (mesh.dim(), problem.model.g_mode) {
        (1, _) => Theorem::OneD,
        (_, GMode::RelativeGrowth) => Theorem::TwoDRelativeG,
        _ => Theorem::TwoD,
    }
}

/// The problem's bundle, or a sampled heuristic one when it has none.
pub fn resolve_bundle(problem: &Problem) -> Result<ConstantsBundle, CliError> {
    match &problem.constants {
        Some(b) => Ok(b.clone()),
        None => Ok(estimate_constants(&problem.model, &problem.sampling)?.bundle),
    }
}

/// Nodal values uniform in `[-m, m]` on free vertices, drawn from stream
/// `stream` of the ChaCha8 generator seeded with `seed`.
pub fn random_start(mesh: &Mesh, m: f64, seed: u64, stream: u64) -> DiscreteField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    DiscreteField::from_fn(mesh, |_| if m > 0.0 { rng.gen_range(-m..=m) } else { 0.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultistartConfig {
    pub starts: usize,
    pub seed: u64,
    /// Half-width of the box the initial nodal values are drawn from.
    pub box_half_width: f64,
    pub newton: NewtonConfig,
    pub theorem: Theorem,
    pub mode: BoundConstantMode,
    /// Converged solutions closer than this in max norm share a cluster.
    pub cluster_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    /// One cluster and a passing certificate.
    CertifiedUnique,
    /// One cluster, no passing certificate. A failed certificate does not
    /// show non-uniqueness.
    EmpiricallyUniqueUncertified,
    DivergentSolutionsFound,
    NoConvergence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartRecord {
    pub start: usize,
    pub converged: bool,
    pub iterations: usize,
    pub residual_norm: f64,
    pub cluster: Option<usize>,
    pub certificate: Option<Status>,
    pub worst_margin: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDifference {
    pub a: usize,
    pub b: usize,
    pub max_nodal_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultistartReport {
    pub seed: u64,
    pub starts: usize,
    pub box_half_width: f64,
    pub theorem: Theorem,
    pub bound_constant_mode: BoundConstantMode,
    pub converged: usize,
    pub clusters: usize,
    pub max_pairwise_difference: Option<f64>,
    pub pairwise: Vec<PairDifference>,
    pub runs: Vec<StartRecord>,
    pub conclusion: Conclusion,
}

/// Runs Newton from `starts` random fields in parallel and certifies every
/// converged solution. Results are ordered by start index and do not depend
/// on the thread count.
pub fn multistart(
    problem: &Problem,
    mesh: &Mesh,
    config: &MultistartConfig,
) -> Result<MultistartReport, CliError> {
    if config.starts < 2 {
        return Err(CliError::Usage("multistart needs at least two starts".into()));
    }
    let mesh = problem.apply_boundary(mesh);
    let bundle = resolve_bundle(problem)?;
    let opts = FemOptions {
        quadrature_degree: problem.quadrature_degree,
    };
    let outcomes: Vec<(StartRecord, Option<DiscreteField>)> = (0..config.starts)
        .into_par_iter()
        .map(|i| {
            let u0 = random_start(&mesh, config.box_half_width, config.seed, i as u64);
            let mut rec = StartRecord {
                start: i,
                converged: false,
                iterations: 0,
                residual_norm: f64::NAN,
                cluster: None,
                certificate: None,
                worst_margin: None,
                error: None,
            };
            match solve_newton(&problem.model, &mesh, &config.newton, &u0, opts) {
                Ok(s) => {
                    rec.converged = s.converged;
                    rec.iterations = s.iterations;
                    rec.residual_norm = s.residual_norm;
                    if !s.converged {
                        return (rec, None);
                    }
                    match certify(config.theorem, &mesh, Some(&s.field), &bundle, config.mode) {
                        Ok(r) => {
                            rec.certificate = Some(r.status);
                            rec.worst_margin = r.worst_margin();
                        }
                        Err(e) => rec.error = Some(e.to_string()),
                    }
                    (rec, Some(s.field))
                }
                Err(e) => {
                    rec.error = Some(e.to_string());
                    (rec, None)
                }
            }
        })
        .collect();

    let mut runs = Vec::with_capacity(outcomes.len());
    let mut solutions = Vec::new();
    for (rec, field) in outcomes {
        if let Some(f) = field {
            solutions.push((rec.start, f));
        }
        runs.push(rec);
    }
    let mut pairwise = Vec::new();
    for (x, (ia, fa)) in solutions.iter().enumerate() {
        for (ib, fb) in &solutions[x + 1..] {
            pairwise.push(PairDifference {
                a: *ia,
                b: *ib,
                max_nodal_difference: fa.max_abs_diff(fb),
            });
        }
    }
    // Greedy clustering against the first member of each cluster.
    let mut reps: Vec<&DiscreteField> = Vec::new();
    for (start, f) in &solutions {
        let c = match reps.iter().position(|r| r.max_abs_diff(f) <= config.cluster_tol) {
            Some(c) => c,
            None => {
                reps.push(f);
                reps.len() - 1
            }
        };
        runs[*start].cluster = Some(c);
    }
    let certified = runs.iter().any(|r| r.certificate == Some(Status::Pass));
    let conclusion = match reps.len() {
        0 => Conclusion::NoConvergence,
        1 if certified => Conclusion::CertifiedUnique,
        1 => Conclusion::EmpiricallyUniqueUncertified,
        _ => Conclusion::DivergentSolutionsFound,
    };
    Ok(MultistartReport {
        seed: config.seed,
        starts: config.starts,
        box_half_width: config.box_half_width,
        theorem: config.theorem,
        bound_constant_mode: config.mode,
        converged: solutions.len(),
        clusters: reps.len(),
        max_pairwise_difference: pairwise
            .iter()
            .map(|p| p.max_nodal_difference)
            .reduce(f64::max),
        pairwise,
        runs,
        conclusion,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateSummary {
    pub status: Status,
    pub worst_margin: Option<f64>,
    pub worst_element: Option<usize>,
}

impl From<&CertificateReport> for CertificateSummary {
    fn from(r: &CertificateReport) -> Self {
        Self {
            status: r.status,
            worst_margin: r.worst_margin(),
            worst_element: r.worst.map(|w| w.id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineLevel {
    pub level: usize,
    pub vertices: usize,
    pub elements: usize,
    pub max_measure: f64,
    pub converged: bool,
    pub iterations: usize,
    pub residual_norm: f64,
    /// Certificate of the previous level's solution interpolated onto this
    /// mesh; absent on level 0.
    pub interpolated: Option<CertificateSummary>,
    pub resolved: CertificateSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub theorem: Theorem,
    pub bound_constant_mode: BoundConstantMode,
    pub levels: Vec<PipelineLevel>,
    pub first_pass_level: Option<usize>,
}

impl PipelineReport {
    pub fn final_status(&self) -> Status {
        self.levels.last().map_or(Status::Inapplicable, |l| l.resolved.status)
    }
}

/// Solves and certifies on `mesh` and on `refinements` successive red
/// refinements. Each level starts Newton from the interpolated solution of
/// the level before.
pub fn pipeline(
    problem: &Problem,
    mesh: &Mesh,
    theorem: Theorem,
    refinements: usize,
    newton: &NewtonConfig,
    mode: BoundConstantMode,
) -> Result<PipelineReport, CliError> {
    let bundle = resolve_bundle(problem)?;
    let opts = FemOptions {
        quadrature_degree: problem.quadrature_degree,
    };
    let mut mesh = problem.apply_boundary(mesh);
    let mut levels = Vec::with_capacity(refinements + 1);
    let mut prev: Option<DiscreteField> = None;
    for level in 0..=refinements {
        let (u0, interpolated) = match prev.take() {
            None => (DiscreteField::zeros(&mesh), None),
            Some(coarse) => {
                let (fine, map) = refine_uniform_mapped(&mesh);
                mesh = fine;
                let u = DiscreteField::new(&mesh, map.prolongate(coarse.values()))?;
                let r = certify(theorem, &mesh, Some(&u), &bundle, mode)?;
                (u, Some(CertificateSummary::from(&r)))
            }
        };
        let s = solve_newton(&problem.model, &mesh, newton, &u0, opts)?;
        let r = certify(theorem, &mesh, Some(&s.field), &bundle, mode)?;
        levels.push(PipelineLevel {
            level,
            vertices: mesh.num_vertices(),
            elements: mesh.num_elements(),
            max_measure: (0..mesh.num_elements())
                .map(|e| mesh.measure(e))
                .fold(0.0, f64::max),
            converged: s.converged,
            iterations: s.iterations,
            residual_norm: s.residual_norm,
            interpolated,
            resolved: CertificateSummary::from(&r),
        });
        prev = Some(s.field);
    }
    let first_pass_level = levels
        .iter()
        .find(|l| l.resolved.status == Status::Pass)
        .map(|l| l.level);
    Ok(PipelineReport {
        theorem,
        bound_constant_mode: mode,
        levels,
        first_pass_level,
    })
}
