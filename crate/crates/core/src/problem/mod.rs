//! Coefficient models for `-div(A(x,u,grad u) grad u) + b(x,u) = 0`.
//!
//! The diffusion coefficient has the split form
//! `A(x,eta,xi) = A0(x,eta) + A1(x,eta) f(|xi|) + A2(x) g(|xi|)`, and the
//! flux is `a = A xi`. Every piece carries its derivative so that residuals,
//! Jacobians and certificate constants all come from the same model.

mod catalog;
mod config;
mod constants;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use catalog::{make_coefficient, Params, Radial, RadialFn, CATALOG};
pub use config::{load_problem, parse_problem, Problem};
pub use constants::{
    estimate_constants, validate_constants, ConstantsBundle, ConstantsEstimate, Extremum,
    Provenance, SamplingBox, ValidationReport, Violation,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("unknown coefficient model `{0}`")]
    UnknownModel(String),
    #[error("parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: String,
    },
    #[error("model `{model}` takes no parameter `{name}`")]
    UnknownParameter { model: String, name: String },
    #[error("sign condition violated: {quantity} = {value:e} at x = {x:?}, eta = {eta}, s = {s}")]
    SignViolation {
        quantity: String,
        value: f64,
        x: [f64; 2],
        eta: f64,
        s: f64,
    },
    #[error("invalid constants: {0}")]
    InvalidBundle(String),
    #[error("model is not semilinear (A must be identically 1)")]
    NotSemilinear,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

/// User callback returning `(value, d/d eta)` at `(x, eta)`.
pub type EtaCallback = Arc<dyn Fn([f64; 2], f64) -> (f64, f64) + Send + Sync>;

/// A scalar function of `(x, eta)` together with its `eta` derivative.
#[derive(Clone)]
pub enum Profile {
    /// `sum_k c[k] eta^k`; `Polynomial(vec![c])` is the constant `c`.
    Polynomial(Vec<f64>),
    /// `base + amp * tanh(scale * eta)`.
    Tanh { base: f64, amp: f64, scale: f64 },
    /// `base + amp * atan(scale * eta)`.
    Arctan { base: f64, amp: f64, scale: f64 },
    Custom(EtaCallback),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Profile::Tanh { base, amp, scale } => f
                .debug_struct("Tanh")
                .field("base", base)
                .field("amp", amp)
                .field("scale", scale)
                .finish(),
            Profile::Arctan { base, amp, scale } => f
                .debug_struct("Arctan")
                .field("base", base)
                .field("amp", amp)
                .field("scale", scale)
                .finish(),
            Profile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Profile {
    pub fn constant(c: f64) -> Self {
        Profile::Polynomial(vec![c])
    }

    pub fn zero() -> Self {
        Profile::Polynomial(vec![0.0])
    }

    /// `c0 + c1 * eta`.
    pub fn affine(c0: f64, c1: f64) -> Self {
        Profile::Polynomial(vec![c0, c1])
    }

    pub fn custom(f: impl Fn([f64; 2], f64) -> (f64, f64) + Send + Sync + 'static) -> Self {
        Profile::Custom(Arc::new(f))
    }

    /// Value and `eta` derivative.
    pub fn eval(&self, x: [f64; 2], eta: f64) -> (f64, f64) {
        match self {
            Profile::Polynomial(c) => {
                // Horner for value and derivative together.
                let mut v = 0.0;
                let mut d = 0.0;
                for &ck in c.iter().rev() {
                    d = d * eta + v;
                    v = v * eta + ck;
                }
                (v, d)
            }
            Profile::Tanh { base, amp, scale } => {
                let t = (scale * eta).tanh();
                (base + amp * t, amp * scale * (1.0 - t * t))
            }
            Profile::Arctan { base, amp, scale } => {
                let z = scale * eta;
                (base + amp * z.atan(), amp * scale / (1.0 + z * z))
            }
            Profile::Custom(cb) => cb(x, eta),
        }
    }

    pub fn value(&self, x: [f64; 2], eta: f64) -> f64 {
        self.eval(x, eta).0
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Profile::Polynomial(c) if c.iter().skip(1).all(|&ck| ck == 0.0) => {
                Some(c.first().copied().unwrap_or(0.0))
            }
            _ => None,
        }
    }

    /// Adds a constant to the profile.
    pub fn shifted(&self, c: f64) -> Profile {
        match self {
            Profile::Polynomial(coeffs) => {
                let mut coeffs = coeffs.clone();
                if coeffs.is_empty() {
                    coeffs.push(0.0);
                }
                coeffs[0] += c;
                Profile::Polynomial(coeffs)
            }
            Profile::Tanh { base, amp, scale } => Profile::Tanh {
                base: base + c,
                amp: *amp,
                scale: *scale,
            },
            Profile::Arctan { base, amp, scale } => Profile::Arctan {
                base: base + c,
                amp: *amp,
                scale: *scale,
            },
            Profile::Custom(cb) => {
                let cb = cb.clone();
                Profile::custom(move |x, eta| {
                    let (v, d) = cb(x, eta);
                    (v + c, d)
                })
            }
        }
    }
}

/// A scalar function of position only (the weight of `g`).
#[derive(Clone)]
pub enum SpaceProfile {
    Constant(f64),
    Custom(Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>),
}

impl fmt::Debug for SpaceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceProfile::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            SpaceProfile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl SpaceProfile {
    pub fn value(&self, x: [f64; 2]) -> f64 {
        match self {
            SpaceProfile::Constant(c) => *c,
            SpaceProfile::Custom(cb) => cb(x),
        }
    }
}

/// Which growth condition the `g` term satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GMode {
    /// `s |g'(s)| <= C_g`.
    BoundedDerivative,
    /// `s |g'(s)| <= C_g_hat g(s)` with `C_g_hat <= c_min`.
    RelativeGrowth,
    Absent,
}

/// The full coefficient description. Immutable and shareable across threads.
#[derive(Debug, Clone)]
pub struct CoefficientModel {
    pub name: String,
    pub a0: Profile,
    /// Weight of `f`; ignored when `f` is `None`.
    pub a1: Profile,
    /// Weight of `g`; ignored when `g` is `None`.
    pub a2: SpaceProfile,
    pub f: Option<Radial>,
    pub g: Option<Radial>,
    pub g_mode: GMode,
    pub b: Profile,
}

/// Pointwise flux data at `(x, eta, xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flux {
    /// `A(x, eta, xi)`.
    pub coef: f64,
    /// `a = A xi`.
    pub a: [f64; 2],
    /// `da/dxi`, symmetric.
    pub da_dxi: [[f64; 2]; 2],
    /// `dA/deta`.
    pub d_coef_deta: f64,
}

/// Below this gradient norm the flux Jacobian takes its `xi -> 0` limit.
pub const ZERO_GRADIENT: f64 = 1e-300;

impl CoefficientModel {
    /// `A = a0`, no gradient dependence, `b = 0`.
    pub fn new(name: impl Into<String>, a0: Profile) -> Self {
        Self {
            name: name.into(),
            a0,
            a1: Profile::zero(),
            a2: SpaceProfile::Constant(0.0),
            f: None,
            g: None,
            g_mode: GMode::Absent,
            b: Profile::zero(),
        }
    }

    /// The Laplacian, `A = 1`, `b = 0`.
    pub fn laplace() -> Self {
        Self::new("constant", Profile::constant(1.0))
    }

    pub fn with_a0(mut self, a0: Profile) -> Self {
        self.a0 = a0;
        self
    }

    pub fn with_f(mut self, weight: Profile, f: Radial) -> Self {
        self.a1 = weight;
        self.f = Some(f);
        self
    }

    pub fn with_g(mut self, weight: SpaceProfile, g: Radial, mode: GMode) -> Self {
        self.a2 = weight;
        self.g = Some(g);
        self.g_mode = mode;
        self
    }

    pub fn with_b(mut self, b: Profile) -> Self {
        self.b = b;
        self
    }

    /// `A == 1` identically, as required by the semilinear certificates.
    pub fn is_semilinear(&self) -> bool {
        self.a0.as_constant() == Some(1.0) && self.f.is_none() && self.g.is_none()
    }

    /// `A(x, eta, xi)` with `s = |xi|`.
    pub fn coef(&self, x: [f64; 2], eta: f64, s: f64) -> f64 {
        let mut a = self.a0.value(x, eta);
        if let Some(f) = &self.f {
            a += self.a1.value(x, eta) * f.value(s);
        }
        if let Some(g) = &self.g {
            a += self.a2.value(x) * g.value(s);
        }
        a
    }

    /// `dA/deta` at `(x, eta, s)`.
    pub fn d_coef_deta(&self, x: [f64; 2], eta: f64, s: f64) -> f64 {
        let mut d = self.a0.eval(x, eta).1;
        if let Some(f) = &self.f {
            d += self.a1.eval(x, eta).1 * f.value(s);
        }
        d
    }

    /// Lower-order term and its `eta` derivative.
    pub fn b(&self, x: [f64; 2], eta: f64) -> (f64, f64) {
        self.b.eval(x, eta)
    }

    /// `A1 s f'(s) + A2 s g'(s)`, the radial part of `da/dxi`.
    fn radial_gain(&self, x: [f64; 2], eta: f64, s: f64) -> f64 {
        let mut r = 0.0;
        if let Some(f) = &self.f {
            r += self.a1.value(x, eta) * f.s_derivative(s);
        }
        if let Some(g) = &self.g {
            r += self.a2.value(x) * g.s_derivative(s);
        }
        r
    }
}

/// Flux, flux Jacobian and `dA/deta` at one point.
///
/// `da/dxi = A I + (A1 s f'(s) + A2 s g'(s)) xi xi^T / s^2` with `s = |xi|`;
/// at `xi = 0` the second term is dropped.
pub fn eval_flux(model: &CoefficientModel, x: [f64; 2], eta: f64, xi: [f64; 2]) -> Flux {
    let s = xi[0].hypot(xi[1]);
    let coef = model.coef(x, eta, s);
    let mut da_dxi = [[coef, 0.0], [0.0, coef]];
    if s >= ZERO_GRADIENT {
        let r = model.radial_gain(x, eta, s) / (s * s);
        for i in 0..2 {
            for j in 0..2 {
                da_dxi[i][j] += r * xi[i] * xi[j];
            }
        }
    }
    Flux {
        coef,
        a: [coef * xi[0], coef * xi[1]],
        da_dxi,
        d_coef_deta: model.d_coef_deta(x, eta, s),
    }
}
