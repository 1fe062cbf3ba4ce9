//! TOML problem files.
//!
//! ```toml
//! [coefficient]
//! model = "glacier"
//! params = { k0 = 1.0, a0 = 1.0 }
//!
//! [a0]            # optional, replaces the constant A0
//! kind = "tanh"
//! base = 2.0
//! amp = 1.0
//! scale = 1.0
//!
//! [b]             # optional, default 0
//! kind = "polynomial"
//! coeffs = [-1.0, 1.0]
//!
//! [boundary]      # optional, overrides the Neumann data of the mesh
//! psi = 0.5
//!
//! [constants]     # optional
//! gamma_a = 1.0
//! k_eta = 1.0
//! b_eta = 0.0
//! lambda0 = 1.0
//!
//! [sampling]      # optional, used by constant estimation/validation
//! samples = 100000
//! seed = 0
//!
//! [fem]           # optional
//! quadrature_degree = 4
//! ```

use std::path::Path;

use serde::Deserialize;

use super::{
    make_coefficient, CoefficientModel, ConstantsBundle, Params, Profile, ProblemError,
    SamplingBox,
};
use crate::mesh::Mesh;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ProfileSpec {
    Constant { value: f64 },
    Polynomial { coeffs: Vec<f64> },
    Tanh { base: f64, amp: f64, scale: f64 },
    Arctan { base: f64, amp: f64, scale: f64 },
}

impl From<ProfileSpec> for Profile {
    fn from(p: ProfileSpec) -> Self {
        match p {
            ProfileSpec::Constant { value } => Profile::constant(value),
            ProfileSpec::Polynomial { coeffs } => Profile::Polynomial(coeffs),
            ProfileSpec::Tanh { base, amp, scale } => Profile::Tanh { base, amp, scale },
            ProfileSpec::Arctan { base, amp, scale } => Profile::Arctan { base, amp, scale },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientSpec {
    model: String,
    #[serde(default)]
    params: Params,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct BoundarySpec {
    psi: Option<f64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FemSpec {
    quadrature_degree: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemSpec {
    coefficient: CoefficientSpec,
    a0: Option<ProfileSpec>,
    a1: Option<ProfileSpec>,
    b: Option<ProfileSpec>,
    #[serde(default)]
    boundary: BoundarySpec,
    constants: Option<ConstantsBundle>,
    #[serde(default)]
    sampling: SamplingBox,
    #[serde(default)]
    fem: FemSpec,
}

/// A coefficient model plus the run data that travels with it.
#[derive(Debug, Clone)]
pub struct Problem {
    pub model: CoefficientModel,
    /// Replaces every Neumann datum of the mesh when set.
    pub psi: Option<f64>,
    pub constants: Option<ConstantsBundle>,
    pub sampling: SamplingBox,
    pub quadrature_degree: usize,
}

impl Problem {
    pub fn new(model: CoefficientModel) -> Self {
        Self {
            model,
            psi: None,
            constants: None,
            sampling: SamplingBox::default(),
            quadrature_degree: 4,
        }
    }

    /// The mesh with this problem's Neumann override applied.
    pub fn apply_boundary(&self, mesh: &Mesh) -> Mesh {
        match self.psi {
            Some(psi) => mesh.with_neumann_psi(psi),
            None => mesh.clone(),
        }
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let spec: ProblemSpec =
        toml::from_str(text).map_err(|e| ProblemError::Config(e.to_string()))?;
    let mut model = make_coefficient(&spec.coefficient.model, &spec.coefficient.params)?;
    if let Some(a0) = spec.a0 {
        model.a0 = a0.into();
    }
    if let Some(a1) = spec.a1 {
        if model.f.is_none() {
            return Err(ProblemError::Config(format!(
                "model `{}` has no f term to weight with [a1]",
                model.name
            )));
        }
        model.a1 = a1.into();
    }
    if let Some(b) = spec.b {
        model.b = b.into();
    }
    if let Some(c) = &spec.constants {
        c.check_basic()?;
    }
    Ok(Problem {
        model,
        psi: spec.boundary.psi,
        constants: spec.constants,
        sampling: spec.sampling,
        quadrature_degree: spec.fem.quadrature_degree.unwrap_or(4),
    })
}

pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem, ProblemError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ProblemError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_problem(&text)
}
