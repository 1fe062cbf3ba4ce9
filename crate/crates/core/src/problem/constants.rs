use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{eval_flux, CoefficientModel, GMode, ProblemError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    #[default]
    UserSupplied,
    /// Obtained from finite sampling; a sample cannot certify a supremum.
    SampledHeuristic,
}

/// Problem constants consumed by the certificates. All entries are treated
/// as bounds: larger `k_eta`, `b_eta`, `lambda*`, `c_*` or smaller
/// `gamma_a`, `lambda0` only make a certificate harder to pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsBundle {
    /// Ellipticity: `zeta^T (da/dxi) zeta >= gamma_a |zeta|^2`.
    pub gamma_a: f64,
    /// `|dA/deta| <= k_eta`.
    pub k_eta: f64,
    /// `0 <= db/deta <= b_eta`.
    pub b_eta: f64,
    /// `A0 >= lambda0`.
    #[serde(default)]
    pub lambda0: f64,
    /// `0 <= A1 <= lambda1`.
    #[serde(default)]
    pub lambda1: f64,
    /// `0 <= A2 <= lambda2`.
    #[serde(default)]
    pub lambda2: f64,
    /// `s |f'(s)| <= c_f`.
    #[serde(default)]
    pub c_f: f64,
    /// `s |g'(s)| <= c_g` (bounded-derivative `g`).
    #[serde(default)]
    pub c_g: f64,
    /// `s |g'(s)| <= c_g_hat g(s)` (relative-growth `g`).
    #[serde(default)]
    pub c_g_hat: Option<f64>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl ConstantsBundle {
    /// Bundle for a model with only the constants of the 1D theorem.
    pub fn basic(gamma_a: f64, k_eta: f64, b_eta: f64) -> Self {
        Self {
            gamma_a,
            k_eta,
            b_eta,
            lambda0: gamma_a,
            lambda1: 0.0,
            lambda2: 0.0,
            c_f: 0.0,
            c_g: 0.0,
            c_g_hat: None,
            provenance: Provenance::UserSupplied,
        }
    }

    /// Checks the sign conventions needed by every certificate.
    /// `k_eta = 0` is accepted; it describes an `eta`-independent `A`.
    pub fn check_basic(&self) -> Result<(), ProblemError> {
        let bad = |m: &str| Err(ProblemError::InvalidBundle(m.to_string()));
        if !(self.gamma_a > 0.0 && self.gamma_a.is_finite()) {
            return bad("gamma_a must be positive");
        }
        if !(self.k_eta >= 0.0 && self.k_eta.is_finite()) {
            return bad("k_eta must be nonnegative");
        }
        if !(self.b_eta >= 0.0 && self.b_eta.is_finite()) {
            return bad("b_eta must be nonnegative");
        }
        Ok(())
    }

    /// Additional checks for the two-dimensional theorems.
    pub fn check_structural(&self) -> Result<(), ProblemError> {
        self.check_basic()?;
        let bad = |m: &str| Err(ProblemError::InvalidBundle(m.to_string()));
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return bad("lambda0 must be positive");
        }
        for (name, v) in [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("c_f", self.c_f),
            ("c_g", self.c_g),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ProblemError::InvalidBundle(format!("{name} must be nonnegative")));
            }
        }
        if let Some(h) = self.c_g_hat {
            if !(h >= 0.0 && h.is_finite()) {
                return bad("c_g_hat must be nonnegative");
            }
        }
        Ok(())
    }
}

/// Sampling ranges for constant estimation and validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingBox {
    pub x_min: [f64; 2],
    pub x_max: [f64; 2],
    pub eta: [f64; 2],
    /// Gradient norms are drawn log-uniformly from this range; the first
    /// sample always uses `s = 0`.
    pub s: [f64; 2],
    pub samples: usize,
    pub seed: u64,
}

impl Default for SamplingBox {
    fn default() -> Self {
        Self {
            x_min: [0.0, 0.0],
            x_max: [1.0, 1.0],
            eta: [-10.0, 10.0],
            s: [1e-6, 1e6],
            samples: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    x: [f64; 2],
    eta: f64,
    s: f64,
    /// Direction of `xi`.
    phi: f64,
}

fn samples(b: &SamplingBox) -> impl Iterator<Item = Sample> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let (ls0, ls1) = (b.s[0].log10(), b.s[1].log10());
    (0..b.samples).map(move |k| {
        let x = [
            rng.gen_range(b.x_min[0]..=b.x_max[0]),
            rng.gen_range(b.x_min[1]..=b.x_max[1]),
        ];
        let eta = rng.gen_range(b.eta[0]..=b.eta[1]);
        let ls: f64 = rng.gen_range(ls0..=ls1);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        Sample {
            x,
            eta,
            s: if k == 0 { 0.0 } else { 10f64.powf(ls) },
            phi,
        }
    })
}

/// Pointwise quantities entering the bounds.
struct PointData {
    a0: f64,
    a1: Option<f64>,
    a2: Option<f64>,
    f: Option<(f64, f64)>,
    g: Option<(f64, f64)>,
    d_coef_deta: f64,
    db: f64,
    min_eig: f64,
}

fn point_data(m: &CoefficientModel, p: &Sample) -> PointData {
    let xi = [p.s * p.phi.cos(), p.s * p.phi.sin()];
    let fl = eval_flux(m, p.x, p.eta, xi);
    let [[a, b], [_, d]] = fl.da_dxi;
    let min_eig = 0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b * b).sqrt();
    PointData {
        a0: m.a0.value(p.x, p.eta),
        a1: m.f.as_ref().map(|_| m.a1.value(p.x, p.eta)),
        a2: m.g.as_ref().map(|_| m.a2.value(p.x)),
        f: m.f.as_ref().map(|f| (f.value(p.s), f.s_derivative(p.s))),
        g: m.g.as_ref().map(|g| (g.value(p.s), g.s_derivative(p.s))),
        d_coef_deta: fl.d_coef_deta,
        db: m.b(p.x, p.eta).1,
        min_eig,
    }
}

/// Sample point attaining a sampled extreme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: f64,
    pub x: [f64; 2],
    pub eta: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsEstimate {
    pub bundle: ConstantsBundle,
    pub samples: usize,
    pub seed: u64,
    /// Extremal sample per constant, keyed by bundle field name.
    pub extremes: BTreeMap<String, Extremum>,
}

struct Tracker {
    extremes: BTreeMap<String, Extremum>,
}

impl Tracker {
    fn max(&mut self, key: &str, value: f64, p: &Sample) {
        self.keep(key, value, p, |new, old| new > old);
    }

    fn min(&mut self, key: &str, value: f64, p: &Sample) {
        self.keep(key, value, p, |new, old| new < old);
    }

    fn keep(&mut self, key: &str, value: f64, p: &Sample, better: impl Fn(f64, f64) -> bool) {
        let e = Extremum {
            value,
            x: p.x,
            eta: p.eta,
            s: p.s,
        };
        match self.extremes.get_mut(key) {
            Some(old) if !better(value, old.value) => {}
            Some(old) => *old = e,
            None => {
                self.extremes.insert(key.to_string(), e);
            }
        }
    }

    fn get(&self, key: &str) -> f64 {
        self.extremes.get(key).map_or(0.0, |e| e.value)
    }
}

fn sign_check(name: &str, value: f64, p: &Sample) -> Result<(), ProblemError> {
    if value < 0.0 || value.is_nan() {
        Err(ProblemError::SignViolation {
            quantity: name.to_string(),
            value,
            x: p.x,
            eta: p.eta,
            s: p.s,
        })
    } else {
        Ok(())
    }
}

/// Heuristic constants from sampling; extremes are sample maxima or minima,
/// not certified suprema. Aborts on the first sample violating a structural
/// sign condition (`f, g, A1, A2, db/deta >= 0`).
pub fn estimate_constants(
    model: &CoefficientModel,
    sampling: &SamplingBox,
) -> Result<ConstantsEstimate, ProblemError> {
    if sampling.samples == 0 {
        return Err(ProblemError::Config("sample count must be positive".into()));
    }
    let mut t = Tracker {
        extremes: BTreeMap::new(),
    };
    for p in samples(sampling) {
        let d = point_data(model, &p);
        sign_check("db/deta", d.db, &p)?;
        t.min("gamma_a", d.min_eig, &p);
        t.max("k_eta", d.d_coef_deta.abs(), &p);
        t.max("b_eta", d.db, &p);
        t.min("lambda0", d.a0, &p);
        if let (Some(a1), Some((f, sf))) = (d.a1, d.f) {
            sign_check("A1", a1, &p)?;
            sign_check("f", f, &p)?;
            t.max("lambda1", a1, &p);
            t.max("c_f", sf.abs(), &p);
        }
        if let (Some(a2), Some((g, sg))) = (d.a2, d.g) {
            sign_check("A2", a2, &p)?;
            sign_check("g", g, &p)?;
            t.max("lambda2", a2, &p);
            match model.g_mode {
                GMode::RelativeGrowth => {
                    if g > 0.0 {
                        t.max("c_g_hat", sg.abs() / g, &p);
                    }
                }
                _ => t.max("c_g", sg.abs(), &p),
            }
        }
    }
    let bundle = ConstantsBundle {
        gamma_a: t.get("gamma_a"),
        k_eta: t.get("k_eta"),
        b_eta: t.get("b_eta"),
        lambda0: t.get("lambda0"),
        lambda1: t.get("lambda1"),
        lambda2: t.get("lambda2"),
        c_f: t.get("c_f"),
        c_g: t.get("c_g"),
        c_g_hat: (model.g_mode == GMode::RelativeGrowth).then(|| t.get("c_g_hat")),
        provenance: Provenance::SampledHeuristic,
    };
    Ok(ConstantsEstimate {
        bundle,
        samples: sampling.samples,
        seed: sampling.seed,
        extremes: t.extremes,
    })
}

/// One bound of the bundle contradicted by a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constant: String,
    pub claimed: f64,
    /// Worst sampled value.
    pub observed: f64,
    pub x: [f64; 2],
    pub eta: f64,
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub samples: usize,
    pub seed: u64,
    /// Provenance of the checked bundle; validation never upgrades it.
    pub provenance: Provenance,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Monte-Carlo spot check of every bound in `bundle`. Violations are
/// reported with the worst sample per constant.
pub fn validate_constants(
    model: &CoefficientModel,
    bundle: &ConstantsBundle,
    sampling: &SamplingBox,
) -> ValidationReport {
    // (constant, claimed, sampled value, lower bound?)
    let mut worst: BTreeMap<&'static str, Violation> = BTreeMap::new();
    let mut record = |name: &'static str, claimed: f64, value: f64, lower: bool, p: &Sample| {
        let violated = if lower { value < claimed } else { value > claimed };
        if !violated && !value.is_nan() {
            return;
        }
        let v = Violation {
            constant: name.to_string(),
            claimed,
            observed: value,
            x: p.x,
            eta: p.eta,
            s: p.s,
        };
        match worst.get_mut(name) {
            Some(old) => {
                let worse = if lower {
                    value < old.observed
                } else {
                    value > old.observed
                };
                if worse {
                    *old = v;
                }
            }
            None => {
                worst.insert(name, v);
            }
        }
    };
    for p in samples(sampling) {
        let d = point_data(model, &p);
        record("gamma_a", bundle.gamma_a, d.min_eig, true, &p);
        record("k_eta", bundle.k_eta, d.d_coef_deta.abs(), false, &p);
        record("b_eta", bundle.b_eta, d.db, false, &p);
        record("db/deta >= 0", 0.0, d.db, true, &p);
        record("lambda0", bundle.lambda0, d.a0, true, &p);
        if let (Some(a1), Some((f, sf))) = (d.a1, d.f) {
            record("lambda1", bundle.lambda1, a1, false, &p);
            record("A1 >= 0", 0.0, a1, true, &p);
            record("f >= 0", 0.0, f, true, &p);
            record("c_f", bundle.c_f, sf.abs(), false, &p);
        }
        if let (Some(a2), Some((g, sg))) = (d.a2, d.g) {
            record("lambda2", bundle.lambda2, a2, false, &p);
            record("A2 >= 0", 0.0, a2, true, &p);
            record("g >= 0", 0.0, g, true, &p);
            match (model.g_mode, bundle.c_g_hat) {
                (GMode::RelativeGrowth, Some(h)) => {
                    // Compare s|g'| against h g without dividing.
                    record("c_g_hat", 0.0, sg.abs() - h * g, false, &p)
                }
                _ => record("c_g", bundle.c_g, sg.abs(), false, &p),
            }
        }
    }
    ValidationReport {
        samples: sampling.samples,
        seed: sampling.seed,
        provenance: bundle.provenance,
        violations: worst.into_values().collect(),
    }
}
