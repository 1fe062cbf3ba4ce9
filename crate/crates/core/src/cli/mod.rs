//! The `qcert` command line. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//! 0 pass/converged, 1 fail, 2 inapplicable, 3 I/O or configuration error.

mod experiments;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

pub use experiments::{
    default_theorem, multistart, pipeline, random_start, resolve_bundle, CertificateSummary,
    Conclusion, MultistartConfig, MultistartReport, PairDifference, PipelineLevel, PipelineReport,
    StartRecord,
};

use crate::certificate::{certify, BoundConstantMode, CertificateError, GContribution, Status, Theorem};
use crate::fem::{load_field, save_field, solve_newton, DiscreteField, FemError, FemOptions, NewtonConfig};
use crate::mesh::{load_mesh, mesh_quality, refine_uniform, save_mesh, Mesh, MeshError};
use crate::oracle::{lemma_audit, verify_pair, LemmaRecord, OracleError, PAIR_TOL};
use crate::problem::{
    estimate_constants, load_problem, validate_constants, GMode, Problem, ProblemError,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INAPPLICABLE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "QCERT_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Parser)]
#[command(name = "qcert", version, about = "P1 solver and discrete comparison certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the discrete problem by damped Newton.
    Solve {
        problem: PathBuf,
        mesh: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        /// Initial guess file; defaults to zero.
        #[arg(long)]
        u0: Option<PathBuf>,
        /// Draw the initial guess uniformly from [-1, 1] with this seed.
        #[arg(long, conflicts_with = "u0")]
        seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluate a uniqueness certificate for a solution.
    Certify {
        problem: PathBuf,
        mesh: PathBuf,
        /// Required by the quasilinear theorems.
        solution: Option<PathBuf>,
        #[arg(long, value_parser = parse_theorem)]
        theorem: Theorem,
        #[arg(long, value_parser = parse_mode, default_value = "corrected")]
        cw: BoundConstantMode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that sol1 is a subsolution, sol2 a supersolution and sol1 <= sol2.
    VerifyPair {
        problem: PathBuf,
        mesh: PathBuf,
        sol1: PathBuf,
        sol2: PathBuf,
        #[arg(long, default_value_t = PAIR_TOL)]
        tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Per-element lemma integrals against their bounds, as CSV.
    LemmaAudit {
        problem: PathBuf,
        mesh: PathBuf,
        sol1: PathBuf,
        sol2: PathBuf,
        #[arg(long, value_parser = parse_mode, default_value = "corrected")]
        cw: BoundConstantMode,
        #[arg(long, default_value_t = PAIR_TOL)]
        tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Mesh angles and certificate geometry, as JSON.
    MeshQuality {
        mesh: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Uniform red refinement.
    Refine {
        mesh: PathBuf,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Sample-check the problem's constants bundle, or estimate one.
    ValidateConstants {
        problem: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Newton from random starts, clustering and certifying the results.
    Multistart {
        problem: PathBuf,
        mesh: PathBuf,
        #[arg(long, default_value_t = 10)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initial values are drawn from [-M, M].
        #[arg(long = "box", default_value_t = 1.0)]
        box_half_width: f64,
        #[arg(long, value_parser = parse_theorem)]
        theorem: Option<Theorem>,
        #[arg(long, value_parser = parse_mode, default_value = "corrected")]
        cw: BoundConstantMode,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-8)]
        cluster_tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve and certify across successive refinements.
    Pipeline {
        problem: PathBuf,
        mesh: PathBuf,
        #[arg(long, value_parser = parse_theorem)]
        theorem: Option<Theorem>,
        #[arg(long, default_value_t = 3)]
        refinements: usize,
        #[arg(long, value_parser = parse_mode, default_value = "corrected")]
        cw: BoundConstantMode,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    Theorem::parse(s).ok_or_else(|| format!("unknown theorem `{s}` (1d, 2d, 2d-relg, semi-5.1, semi-5.2)"))
}

fn parse_mode(s: &str) -> Result<BoundConstantMode, String> {
    BoundConstantMode::parse(s).ok_or_else(|| format!("unknown bound constant mode `{s}` (paper, corrected)"))
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
        }
    };
    configure_threads();
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // Fails only if the pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Pass => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::Inapplicable => EXIT_INAPPLICABLE,
    }
}

fn write_text(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json<T: Serialize>(value: &T, output: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    write_text(&text, output)
}

fn load_inputs(problem: &Path, mesh: &Path) -> Result<(Problem, Mesh, FemOptions), CliError> {
    let problem = load_problem(problem)?;
    let mesh = problem.apply_boundary(&load_mesh(mesh)?);
    let opts = FemOptions {
        quadrature_degree: problem.quadrature_degree,
    };
    Ok((problem, mesh, opts))
}

fn newton_config(tol: f64, max_iter: usize) -> NewtonConfig {
    NewtonConfig {
        tol,
        max_iter,
        ..NewtonConfig::default()
    }
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    converged: bool,
    iterations: usize,
    initial_residual_norm: f64,
    residual_norm: f64,
    seed: Option<u64>,
    history: &'a [crate::fem::IterationRecord],
}

/// One CSV row per sign-change element.
pub fn lemma_csv(records: &[LemmaRecord], tol: f64) -> String {
    let mut s = String::from(
        "element,a_i,a_j,a_k,positive,theta_j,p_t,principal_lhs,principal_rhs,eta_lhs,eta_rhs,b_lhs,b_rhs,holds\n",
    );
    for r in records {
        let positive = match r.positive {
            crate::oracle::PositiveVertices::One => "one",
            crate::oracle::PositiveVertices::Two => "two",
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}",
            r.element,
            r.ordering[0],
            r.ordering[1],
            r.ordering[2],
            positive,
            r.theta_j,
            r.p_t,
            r.principal_lhs,
            r.principal_rhs,
            r.eta_lhs,
            r.eta_rhs,
            r.b_lhs,
            r.b_rhs,
            r.all_hold(tol)
        );
    }
    s
}

fn execute(cmd: &Command) -> Result<i32, CliError> {
    match cmd {
        Command::Solve {
            problem,
            mesh,
            tol,
            max_iter,
            u0,
            seed,
            output,
        } => {
            let (problem, mesh, opts) = load_inputs(problem, mesh)?;
            let u0 = match (u0, seed) {
                (Some(p), _) => load_field(p, &mesh)?,
                (None, Some(s)) => random_start(&mesh, 1.0, *s, 0),
                (None, None) => DiscreteField::zeros(&mesh),
            };
            let config = newton_config(*tol, *max_iter);
            let s = match solve_newton(&problem.model, &mesh, &config, &u0, opts) {
                Ok(s) => s,
                Err(e @ FemError::SingularJacobian { .. }) => {
                    eprintln!("error: {e}");
                    return Ok(EXIT_FAIL);
                }
                Err(e) => return Err(e.into()),
            };
            save_field(output, &s.field)?;
            write_json(
                &SolveSummary {
                    converged: s.converged,
                    iterations: s.iterations,
                    initial_residual_norm: s.initial_residual_norm,
                    residual_norm: s.residual_norm,
                    seed: *seed,
                    history: &s.history,
                },
                None,
            )?;
            Ok(if s.converged { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Certify {
            problem,
            mesh,
            solution,
            theorem,
            cw,
            output,
        } => {
            let (problem, mesh, _) = load_inputs(problem, mesh)?;
            let field = solution.as_ref().map(|p| load_field(p, &mesh)).transpose()?;
            let bundle = resolve_bundle(&problem)?;
            let report = certify(*theorem, &mesh, field.as_ref(), &bundle, *cw)?;
            write_json(&report, output.as_deref())?;
            Ok(status_code(report.status))
        }
        Command::VerifyPair {
            problem,
            mesh,
            sol1,
            sol2,
            tol,
            output,
        } => {
            let (problem, mesh, opts) = load_inputs(problem, mesh)?;
            let u1 = load_field(sol1, &mesh)?;
            let u2 = load_field(sol2, &mesh)?;
            let v = verify_pair(&problem.model, &mesh, &u1, &u2, *tol, opts)?;
            write_json(&v, output.as_deref())?;
            let pass = v.is_subsolution && v.is_supersolution && v.comparison_holds;
            Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::LemmaAudit {
            problem,
            mesh,
            sol1,
            sol2,
            cw,
            tol,
            output,
        } => {
            let (problem, mesh, opts) = load_inputs(problem, mesh)?;
            let u1 = load_field(sol1, &mesh)?;
            let u2 = load_field(sol2, &mesh)?;
            let bundle = resolve_bundle(&problem)?;
            let g = match problem.model.g_mode {
                GMode::RelativeGrowth => GContribution::RelativeG,
                _ => GContribution::FullG,
            };
            let records = lemma_audit(&problem.model, &mesh, &u1, &u2, &bundle, *cw, g, opts)?;
            write_text(&lemma_csv(&records, *tol), output.as_deref())?;
            let pass = records.iter().all(|r| r.all_hold(*tol));
            Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::MeshQuality { mesh, output } => {
            let q = mesh_quality(&load_mesh(mesh)?);
            write_json(&q, output.as_deref())?;
            Ok(if q.acute() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Refine {
            mesh,
            levels,
            output,
        } => {
            let mut m = load_mesh(mesh)?;
            for _ in 0..*levels {
                m = refine_uniform(&m);
            }
            save_mesh(&m, output)?;
            Ok(EXIT_PASS)
        }
        Command::ValidateConstants {
            problem,
            samples,
            seed,
            output,
        } => {
            let problem = load_problem(problem)?;
            let mut sampling = problem.sampling.clone();
            if let Some(n) = samples {
                sampling.samples = *n;
            }
            if let Some(s) = seed {
                sampling.seed = *s;
            }
            match &problem.constants {
                Some(bundle) => {
                    let r = validate_constants(&problem.model, bundle, &sampling);
                    write_json(&r, output.as_deref())?;
                    Ok(if r.passed() { EXIT_PASS } else { EXIT_FAIL })
                }
                None => {
                    let est = estimate_constants(&problem.model, &sampling)?;
                    write_json(&est, output.as_deref())?;
                    Ok(EXIT_PASS)
                }
            }
        }
        Command::Multistart {
            problem,
            mesh,
            starts,
            seed,
            box_half_width,
            theorem,
            cw,
            tol,
            max_iter,
            cluster_tol,
            output,
        } => {
            let (problem, mesh, _) = load_inputs(problem, mesh)?;
            let config = MultistartConfig {
                starts: *starts,
                seed: *seed,
                box_half_width: *box_half_width,
                newton: newton_config(*tol, *max_iter),
                theorem: theorem.unwrap_or_else(|| default_theorem(&problem, &mesh)),
                mode: *cw,
                cluster_tol: *cluster_tol,
            };
            let r = multistart(&problem, &mesh, &config)?;
            write_json(&r, output.as_deref())?;
            Ok(match r.conclusion {
                Conclusion::CertifiedUnique | Conclusion::EmpiricallyUniqueUncertified => EXIT_PASS,
                Conclusion::DivergentSolutionsFound | Conclusion::NoConvergence => EXIT_FAIL,
            })
        }
        Command::Pipeline {
            problem,
            mesh,
            theorem,
            refinements,
            cw,
            tol,
            max_iter,
            output,
        } => {
            let (problem, mesh, _) = load_inputs(problem, mesh)?;
            let theorem = theorem.unwrap_or_else(|| default_theorem(&problem, &mesh));
            let r = pipeline(
                &problem,
                &mesh,
                theorem,
                *refinements,
                &newton_config(*tol, *max_iter),
                *cw,
            )?;
            write_json(&r, output.as_deref())?;
            Ok(status_code(r.final_status()))
        }
    }
}
