//! Verifiable uniqueness conditions: per-element margins computed from mesh
//! geometry, a constants bundle and (for the quasilinear theorems) a discrete
//! solution.

mod stieltjes;
mod theorems;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use stieltjes::{stieltjes_check, StieltjesVerdict};
pub use theorems::{certify, certify_1d, certify_2d, certify_semilinear, p_star};

use crate::fem::FemError;
use crate::mesh::Mesh;
use crate::problem::{ConstantsBundle, ProblemError, Provenance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertificateError {
    #[error("theorem inapplicable: {0}")]
    Inapplicable(String),
    #[error(transparent)]
    Bundle(#[from] ProblemError),
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error("{0}")]
    Mismatch(String),
}

/// Which condition is being certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theorem {
    /// One-dimensional comparison condition on each interval.
    #[serde(rename = "1d")]
    OneD,
    /// Two-dimensional condition with bounded `s g'(s)`.
    #[serde(rename = "2d")]
    TwoD,
    /// Two-dimensional condition with relative growth of `g`.
    #[serde(rename = "2d-relg")]
    TwoDRelativeG,
    /// Semilinear condition from the comparison argument (strict).
    #[serde(rename = "semi-5.1")]
    Semilinear51,
    /// Semilinear condition from the Stieltjes-matrix argument (non-strict).
    #[serde(rename = "semi-5.2")]
    Semilinear52,
}

impl Theorem {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "1d" => Theorem::OneD,
            "2d" => Theorem::TwoD,
            "2d-relg" => Theorem::TwoDRelativeG,
            "semi-5.1" => Theorem::Semilinear51,
            "semi-5.2" => Theorem::Semilinear52,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::OneD => "1d",
            Theorem::TwoD => "2d",
            Theorem::TwoDRelativeG => "2d-relg",
            Theorem::Semilinear51 => "semi-5.1",
            Theorem::Semilinear52 => "semi-5.2",
        }
    }

    /// Whether the element condition is `margin >= 0` rather than `> 0`.
    pub fn non_strict(self) -> bool {
        self == Theorem::Semilinear52
    }
}

/// Constant in `int_T |w| <= C_w delta_T(w) |T|` and the matching form of the
/// principal-term bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BoundConstantMode {
    /// The printed constants: `C_w = 7/6` and `gamma_a / r_T`.
    #[serde(rename = "paper-7/6")]
    Paper,
    /// `C_w = 4/3` (exact `int phi_i = |T|/3`) and `gamma_a * r_T`.
    #[default]
    #[serde(rename = "corrected-4/3")]
    Corrected,
}

impl BoundConstantMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paper" | "paper-7/6" => Some(Self::Paper),
            "corrected" | "corrected-4/3" => Some(Self::Corrected),
            _ => None,
        }
    }

    pub fn c_w(self) -> f64 {
        match self {
            Self::Paper => 7.0 / 6.0,
            Self::Corrected => 4.0 / 3.0,
        }
    }

    /// Lower bound for the principal term's diagonal part on an element
    /// with sine ratio `r_t`.
    pub fn gamma_term(self, gamma_a: f64, r_t: f64) -> f64 {
        match self {
            Self::Paper => gamma_a / r_t,
            Self::Corrected => gamma_a * r_t,
        }
    }
}

/// How the `g` contribution enters `p*_T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GContribution {
    FullG,
    RelativeG,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

/// Geometric constants an element margin was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementConstants {
    Interval { h: f64 },
    Triangle {
        c_t: f64,
        s_t: f64,
        r_t: f64,
        area: f64,
        min_cot: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementCertificate {
    pub id: usize,
    /// Largest nodal difference of the solution on the element.
    pub delta_u: Option<f64>,
    pub p_star: Option<f64>,
    pub margin: f64,
    pub pass: bool,
    pub constants_used: ElementConstants,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstElement {
    pub id: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub theorem: Theorem,
    pub status: Status,
    pub global_pass: bool,
    pub bound_constant_mode: BoundConstantMode,
    pub constants: ConstantsBundle,
    pub constants_provenance: Provenance,
    /// Value of the global hypothesis where the theorem has one.
    pub hypothesis: Option<f64>,
    pub elements: Vec<ElementCertificate>,
    pub worst: Option<WorstElement>,
    /// Reason for an inapplicable verdict.
    pub reason: Option<String>,
    pub notes: Vec<String>,
}

impl CertificateReport {
    fn from_elements(
        theorem: Theorem,
        mode: BoundConstantMode,
        bundle: &ConstantsBundle,
        hypothesis: Option<f64>,
        elements: Vec<ElementCertificate>,
    ) -> Self {
        let worst = elements
            .iter()
            .fold(None::<&ElementCertificate>, |w, e| match w {
                Some(w) if w.margin <= e.margin => Some(w),
                _ => Some(e),
            })
            .map(|e| WorstElement {
                id: e.id,
                margin: e.margin,
            });
        let global_pass = elements.iter().all(|e| e.pass);
        Self {
            theorem,
            status: if global_pass { Status::Pass } else { Status::Fail },
            global_pass,
            bound_constant_mode: mode,
            constants: bundle.clone(),
            constants_provenance: bundle.provenance,
            hypothesis,
            elements,
            worst,
            reason: None,
            notes: Vec::new(),
        }
    }

    fn inapplicable(
        theorem: Theorem,
        mode: BoundConstantMode,
        bundle: &ConstantsBundle,
        hypothesis: Option<f64>,
        reason: impl Into<String>,
    ) -> Self {
        Self {
            theorem,
            status: Status::Inapplicable,
            global_pass: false,
            bound_constant_mode: mode,
            constants: bundle.clone(),
            constants_provenance: bundle.provenance,
            hypothesis,
            elements: Vec::new(),
            worst: None,
            reason: Some(reason.into()),
            notes: Vec::new(),
        }
    }

    pub fn worst_margin(&self) -> Option<f64> {
        self.worst.map(|w| w.margin)
    }
}

/// `max |phi(a_i) - phi(a_j)|` over the vertices of element `e`.
pub fn delta_t(mesh: &Mesh, values: &[f64], e: usize) -> f64 {
    let vs = mesh.element_vertices(e);
    let (lo, hi) = vs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(values[v]), hi.max(values[v]))
    });
    hi - lo
}
