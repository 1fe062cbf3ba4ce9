use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{CoefficientModel, GMode, Profile, ProblemError, SpaceProfile};

pub type Params = BTreeMap<String, f64>;

/// A user-supplied radial nonlinearity. `s_derivative` should stay finite
/// as `s -> 0`; override it when `s * derivative(s)` is not.
pub trait RadialFn: Send + Sync {
    fn value(&self, s: f64) -> f64;
    fn derivative(&self, s: f64) -> f64;
    fn s_derivative(&self, s: f64) -> f64 {
        s * self.derivative(s)
    }
}

/// Scalar function of the gradient norm `s = |xi| >= 0`.
#[derive(Clone)]
pub enum Radial {
    /// `(kappa + s^2)^(-alpha)`.
    PowerKernel { kappa: f64, alpha: f64 },
    /// `2 / (k0 + sqrt(k0^2 + 4 s))`.
    Glacier { k0: f64 },
    Arctan,
    Tanh,
    /// `ln(kappa + s^2)`, `kappa > 1`.
    LogGrowth { kappa: f64 },
    /// `s^(p-2)`, `p >= 2`.
    PLaplacian { p: f64 },
    Constant(f64),
    Custom(Arc<dyn RadialFn>),
}

impl fmt::Debug for Radial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radial::PowerKernel { kappa, alpha } => f
                .debug_struct("PowerKernel")
                .field("kappa", kappa)
                .field("alpha", alpha)
                .finish(),
            Radial::Glacier { k0 } => f.debug_struct("Glacier").field("k0", k0).finish(),
            Radial::Arctan => f.write_str("Arctan"),
            Radial::Tanh => f.write_str("Tanh"),
            Radial::LogGrowth { kappa } => {
                f.debug_struct("LogGrowth").field("kappa", kappa).finish()
            }
            Radial::PLaplacian { p } => f.debug_struct("PLaplacian").field("p", p).finish(),
            Radial::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Radial::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// `sup_s s sech^2(s)`, attained where `2 s tanh(s) = 1`.
const TANH_GROWTH: f64 = 0.447_743_204_694_302_9;

impl Radial {
    pub fn value(&self, s: f64) -> f64 {
        match self {
            Radial::PowerKernel { kappa, alpha } => (kappa + s * s).powf(-alpha),
            Radial::Glacier { k0 } => 2.0 / (k0 + (k0 * k0 + 4.0 * s).sqrt()),
            Radial::Arctan => s.atan(),
            Radial::Tanh => s.tanh(),
            Radial::LogGrowth { kappa } => (kappa + s * s).ln(),
            Radial::PLaplacian { p } => {
                if *p == 2.0 {
                    1.0
                } else {
                    s.powf(p - 2.0)
                }
            }
            Radial::Constant(c) => *c,
            Radial::Custom(r) => r.value(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match self {
            Radial::PowerKernel { kappa, alpha } => {
                -2.0 * alpha * s * (kappa + s * s).powf(-alpha - 1.0)
            }
            Radial::Glacier { k0 } => {
                let r = (k0 * k0 + 4.0 * s).sqrt();
                -4.0 / ((k0 + r).powi(2) * r)
            }
            Radial::Arctan => 1.0 / (1.0 + s * s),
            Radial::Tanh => {
                let t = s.tanh();
                1.0 - t * t
            }
            Radial::LogGrowth { kappa } => 2.0 * s / (kappa + s * s),
            Radial::PLaplacian { p } => {
                if *p == 2.0 {
                    0.0
                } else {
                    (p - 2.0) * s.powf(p - 3.0)
                }
            }
            Radial::Constant(_) => 0.0,
            Radial::Custom(r) => r.derivative(s),
        }
    }

    /// `s f'(s)`, written to stay finite at `s = 0`.
    pub fn s_derivative(&self, s: f64) -> f64 {
        match self {
            Radial::PLaplacian { p } => {
                if *p == 2.0 {
                    0.0
                } else {
                    (p - 2.0) * s.powf(p - 2.0)
                }
            }
            Radial::Custom(r) => r.s_derivative(s),
            _ => s * self.derivative(s),
        }
    }

    /// Closed-form `sup_s s |f'(s)|` where one is known. For
    /// [`Radial::PLaplacian`] this is the relative constant `|p - 2|` of
    /// `s |g'(s)| <= C g(s)` instead.
    pub fn growth_bound(&self) -> Option<f64> {
        match self {
            Radial::PowerKernel { kappa, alpha } => {
                if *alpha == 0.0 {
                    Some(0.0)
                } else {
                    // Maximum of 2 alpha t (kappa + t)^(-alpha-1) at t = kappa / alpha.
                    Some(2.0 * kappa.powf(-alpha) * (alpha / (alpha + 1.0)).powf(alpha + 1.0))
                }
            }
            // Maximum at sqrt(k0^2 + 4s) = (1 + sqrt 2) k0.
            Radial::Glacier { k0 } => Some((3.0 - 2.0 * 2f64.sqrt()) / k0),
            Radial::Arctan => Some(0.5),
            Radial::Tanh => Some(TANH_GROWTH),
            // 2 s^2 / (kappa + s^2) increases to 2.
            Radial::LogGrowth { .. } => Some(2.0),
            Radial::PLaplacian { p } => Some((p - 2.0).abs()),
            Radial::Constant(_) => Some(0.0),
            Radial::Custom(_) => None,
        }
    }
}

/// Catalog identifiers accepted by [`make_coefficient`].
pub const CATALOG: &[&str] = &[
    "power_kernel",
    "mean_curvature",
    "glacier",
    "arctan",
    "tanh",
    "log_growth",
    "p_laplacian",
    "constant",
];

struct ParamReader<'a> {
    model: &'a str,
    params: &'a Params,
    used: Vec<&'static str>,
}

impl<'a> ParamReader<'a> {
    fn get(&mut self, name: &'static str, default: f64) -> f64 {
        self.used.push(name);
        self.params.get(name).copied().unwrap_or(default)
    }

    fn finish(self) -> Result<(), ProblemError> {
        match self.params.keys().find(|k| !self.used.contains(&k.as_str())) {
            Some(k) => Err(ProblemError::UnknownParameter {
                model: self.model.to_string(),
                name: k.clone(),
            }),
            None => Ok(()),
        }
    }
}

fn require(name: &str, value: f64, ok: bool, reason: &str) -> Result<(), ProblemError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ProblemError::InvalidParameter {
            name: name.to_string(),
            value,
            reason: reason.to_string(),
        })
    }
}

/// Builds a catalog model.
///
/// Gradient models install their nonlinearity with constant weight
/// `weight` (default 1) next to a constant `a0` (default 0), so that
/// `mean_curvature` with no parameters is exactly `A = (1 + s^2)^(-1/2)`.
/// `log_growth` and `p_laplacian` go into the `g` slot, the others into `f`.
/// `constant` takes `value` (default 1). `b` is zero; attach one with
/// [`CoefficientModel::with_b`]. User-defined models are assembled in code
/// from [`Profile::Custom`] and [`Radial::Custom`].
pub fn make_coefficient(name: &str, params: &Params) -> Result<CoefficientModel, ProblemError> {
    let mut r = ParamReader {
        model: name,
        params,
        used: Vec::new(),
    };
    if name == "constant" {
        let value = r.get("value", 1.0);
        require("value", value, value > 0.0, "must be positive")?;
        r.finish()?;
        return Ok(CoefficientModel::new(name, Profile::constant(value)));
    }
    let a0 = r.get("a0", 0.0);
    require("a0", a0, a0 >= 0.0, "must be nonnegative")?;
    let weight = r.get("weight", 1.0);
    require("weight", weight, weight >= 0.0, "must be nonnegative")?;
    let (radial, in_g, mode) = match name {
        "power_kernel" => {
            let kappa = r.get("kappa", 1.0);
            let alpha = r.get("alpha", 0.5);
            require("kappa", kappa, kappa > 0.0, "must be positive")?;
            require("alpha", alpha, alpha >= 0.0, "must be nonnegative")?;
            (Radial::PowerKernel { kappa, alpha }, false, GMode::Absent)
        }
        "mean_curvature" => (
            Radial::PowerKernel {
                kappa: 1.0,
                alpha: 0.5,
            },
            false,
            GMode::Absent,
        ),
        "glacier" => {
            let k0 = r.get("k0", 1.0);
            require("k0", k0, k0 > 0.0, "must be positive")?;
            (Radial::Glacier { k0 }, false, GMode::Absent)
        }
        "arctan" => (Radial::Arctan, false, GMode::Absent),
        "tanh" => (Radial::Tanh, false, GMode::Absent),
        "log_growth" => {
            let kappa = r.get("kappa", 2.0);
            require("kappa", kappa, kappa > 1.0, "must exceed 1")?;
            (Radial::LogGrowth { kappa }, true, GMode::BoundedDerivative)
        }
        "p_laplacian" => {
            let p = r.get("p", 2.0);
            require(
                "p",
                p,
                p >= 2.0,
                "must be at least 2 (s^(p-2) is singular at s = 0 otherwise)",
            )?;
            (Radial::PLaplacian { p }, true, GMode::RelativeGrowth)
        }
        other => return Err(ProblemError::UnknownModel(other.to_string())),
    };
    r.finish()?;
    let model = CoefficientModel::new(name, Profile::constant(a0));
    Ok(if in_g {
        model.with_g(SpaceProfile::Constant(weight), radial, mode)
    } else {
        model.with_f(Profile::constant(weight), radial)
    })
}
