//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use qcert::mesh::{unit_square_acute_refined, BoundaryMarker, Mesh, TriMesh2D};
use qcert::problem::{CoefficientModel, Profile};
use rand::Rng;

/// Unit square after `levels` red refinements, Dirichlet on `y = 0` and
/// Neumann flux `psi` on the other three sides.
pub fn mixed_square(levels: usize, psi: f64) -> Mesh {
    unit_square_acute_refined(levels, BoundaryMarker::Dirichlet)
        .remark_boundary(|_, a, b| {
            if a[1] == 0.0 && b[1] == 0.0 {
                (BoundaryMarker::Dirichlet, 0.0)
            } else {
                (BoundaryMarker::Neumann, psi)
            }
        })
        .unwrap()
        .into()
}

/// `A = 2 + tanh(u)`, `b = 0`.
pub fn tanh_model() -> CoefficientModel {
    CoefficientModel::new(
        "tanh-a0",
        Profile::Tanh {
            base: 2.0,
            amp: 1.0,
            scale: 1.0,
        },
    )
}

/// Counterclockwise triangle with all angles in `(min_angle, pi/2 - slack)`,
/// randomly rotated, scaled and translated.
pub fn random_acute_triangle(rng: &mut impl Rng, min_angle: f64, slack: f64) -> [[f64; 2]; 3] {
    loop {
        let t1 = rng.gen_range(min_angle..PI / 2.0);
        let t2 = rng.gen_range(min_angle..PI / 2.0);
        let t3 = PI - t1 - t2;
        if t3 <= min_angle || t3 >= PI / 2.0 - slack || t1 >= PI / 2.0 - slack || t2 >= PI / 2.0 - slack {
            continue;
        }
        // Base from a0 to a1, apex from the angle at a0.
        let base = 1.0;
        let side = base * t2.sin() / t3.sin();
        let local = [[0.0, 0.0], [base, 0.0], [side * t1.cos(), side * t1.sin()]];
        return place(local, rng);
    }
}

/// Non-degenerate counterclockwise triangle with arbitrary angles.
pub fn random_triangle(rng: &mut impl Rng) -> [[f64; 2]; 3] {
    loop {
        let p: [[f64; 2]; 3] = std::array::from_fn(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
        let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        if det > 1e-3 {
            return p;
        }
    }
}

fn place(local: [[f64; 2]; 3], rng: &mut impl Rng) -> [[f64; 2]; 3] {
    let phi = rng.gen_range(0.0..2.0 * PI);
    let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
    let shift = [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)];
    let (s, c) = phi.sin_cos();
    local.map(|p| {
        [
            shift[0] + scale * (c * p[0] - s * p[1]),
            shift[1] + scale * (s * p[0] + c * p[1]),
        ]
    })
}

/// Single-element mesh, every edge Dirichlet.
pub fn single_triangle(p: [[f64; 2]; 3]) -> Mesh {
    TriMesh2D::with_uniform_boundary(p.to_vec(), vec![[0, 1, 2]], BoundaryMarker::Dirichlet)
        .unwrap()
        .into()
}

/// Edge lengths (edge `i` opposite vertex `i`), interior angles and area by
/// plain vector arithmetic.
pub struct BruteGeometry {
    pub edges: [f64; 3],
    pub angles: [f64; 3],
    pub area: f64,
}

pub fn brute_geometry(p: [[f64; 2]; 3]) -> BruteGeometry {
    let sub = |a: [f64; 2], b: [f64; 2]| [a[0] - b[0], a[1] - b[1]];
    let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let edges = std::array::from_fn(|i| norm(sub(p[(i + 2) % 3], p[(i + 1) % 3])));
    let angles = std::array::from_fn(|i| {
        let u = sub(p[(i + 1) % 3], p[i]);
        let v = sub(p[(i + 2) % 3], p[i]);
        ((u[0] * v[0] + u[1] * v[1]) / (norm(u) * norm(v))).acos()
    });
    let u = sub(p[1], p[0]);
    let v = sub(p[2], p[0]);
    BruteGeometry {
        edges,
        angles,
        area: 0.5 * (u[0] * v[1] - u[1] * v[0]).abs(),
    }
}

/// `int_T max(w, 0)` for linear `w` by clipping the triangle to `w >= 0`
/// and integrating over a fan of the clipped polygon (the centroid rule is
/// exact for linear integrands).
pub fn positive_part_integral(p: [[f64; 2]; 3], w: [f64; 3]) -> f64 {
    let mut poly: Vec<([f64; 2], f64)> = Vec::new();
    for k in 0..3 {
        let (a, wa) = (p[k], w[k]);
        let (b, wb) = (p[(k + 1) % 3], w[(k + 1) % 3]);
        if wa >= 0.0 {
            poly.push((a, wa));
        }
        if (wa > 0.0 && wb < 0.0) || (wa < 0.0 && wb > 0.0) {
            let t = wa / (wa - wb);
            poly.push(([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])], 0.0));
        }
    }
    let mut total = 0.0;
    for k in 1..poly.len().saturating_sub(1) {
        let (a, b, c) = (poly[0], poly[k], poly[k + 1]);
        let area = 0.5
            * ((b.0[0] - a.0[0]) * (c.0[1] - a.0[1]) - (c.0[0] - a.0[0]) * (b.0[1] - a.0[1])).abs();
        total += area * (a.1 + b.1 + c.1) / 3.0;
    }
    total
}

/// `int_T |w|` from the clipping oracle.
pub fn abs_integral_oracle(p: [[f64; 2]; 3], w: [f64; 3]) -> f64 {
    positive_part_integral(p, w) + positive_part_integral(p, w.map(|x| -x))
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
