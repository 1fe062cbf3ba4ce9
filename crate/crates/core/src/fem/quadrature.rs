//! Quadrature rules. Weights are normalised to sum to one, so an integral is
//! `measure * sum w_q f(x_q)`.

use super::FemError;

/// Barycentric points and weights on a triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Points in `[0, 1]` and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_legendre needs at least one point");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `n`-point Gauss rule mapped to `[0, 1]`.
pub fn interval_rule(n: usize) -> IntervalRule {
    let (x, w) = gauss_legendre(n);
    IntervalRule {
        points: x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        weights: w.iter().map(|v| 0.5 * v).collect(),
    }
}

impl IntervalRule {
    /// Gauss rule exact for polynomials of `degree` on an interval, never
    /// coarser than three points.
    pub fn for_degree(degree: usize) -> Result<Self, FemError> {
        if degree == 0 {
            return Err(FemError::QuadratureUnset);
        }
        Ok(interval_rule((degree + 2).div_ceil(2).max(3)))
    }
}

/// A rule exact for polynomials of total degree `degree` on triangles.
///
/// Degrees 1 to 4 use the symmetric centroid, 3-point and 6-point rules;
/// higher degrees use a collapsed (Duffy) Gauss product rule.
pub fn triangle_rule(degree: usize) -> Result<TriangleRule, FemError> {
    match degree {
        0 => Err(FemError::QuadratureUnset),
        1 => Ok(TriangleRule {
            points: vec![[1.0 / 3.0; 3]],
            weights: vec![1.0],
        }),
        2 => {
            let (a, b) = (2.0 / 3.0, 1.0 / 6.0);
            Ok(TriangleRule {
                points: vec![[a, b, b], [b, a, b], [b, b, a]],
                weights: vec![1.0 / 3.0; 3],
            })
        }
        3 | 4 => {
            let (a1, b1, w1) = (0.445948490915965, 0.108103018168070, 0.223381589678011);
            let (a2, b2, w2) = (0.091576213509771, 0.816847572980459, 0.109951743655322);
            Ok(TriangleRule {
                points: vec![
                    [b1, a1, a1],
                    [a1, b1, a1],
                    [a1, a1, b1],
                    [b2, a2, a2],
                    [a2, b2, a2],
                    [a2, a2, b2],
                ],
                weights: vec![w1, w1, w1, w2, w2, w2],
            })
        }
        d => {
            // The Duffy factor (1 - u) raises the degree in u by one.
            let n = (d + 2).div_ceil(2);
            let r = interval_rule(n);
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for (&u, &wu) in r.points.iter().zip(&r.weights) {
                for (&v, &wv) in r.points.iter().zip(&r.weights) {
                    let l1 = u;
                    let l2 = v * (1.0 - u);
                    points.push([1.0 - l1 - l2, l1, l2]);
                    weights.push(2.0 * wu * wv * (1.0 - u));
                }
            }
            Ok(TriangleRule { points, weights })
        }
    }
}
