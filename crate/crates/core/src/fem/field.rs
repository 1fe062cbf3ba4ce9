//! Nodal P1 fields and the plain-text solution format:
//!
//! ```text
//! field 3
//! 0.0
//! 0.25
//! 0.0
//! ```

use std::path::Path;

use super::FemError;
use crate::mesh::Mesh;

/// One value per mesh vertex, zero on the Dirichlet boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteField {
    values: Vec<f64>,
    dirichlet_mask: Vec<bool>,
}

impl DiscreteField {
    pub fn new(mesh: &Mesh, values: Vec<f64>) -> Result<Self, FemError> {
        let dirichlet_mask = mesh.dirichlet_mask();
        if values.len() != dirichlet_mask.len() {
            return Err(FemError::FieldLength {
                expected: dirichlet_mask.len(),
                got: values.len(),
            });
        }
        for (v, (&x, &d)) in values.iter().zip(&dirichlet_mask).enumerate() {
            if d && x != 0.0 {
                return Err(FemError::DirichletValue {
                    vertex: v,
                    value: x,
                });
            }
        }
        Ok(Self {
            values,
            dirichlet_mask,
        })
    }

    pub fn zeros(mesh: &Mesh) -> Self {
        let dirichlet_mask = mesh.dirichlet_mask();
        Self {
            values: vec![0.0; dirichlet_mask.len()],
            dirichlet_mask,
        }
    }

    /// Nodal interpolant of `f`, forced to zero on Dirichlet vertices.
    pub fn from_fn(mesh: &Mesh, mut f: impl FnMut([f64; 2]) -> f64) -> Self {
        let dirichlet_mask = mesh.dirichlet_mask();
        let values = (0..dirichlet_mask.len())
            .map(|v| {
                if dirichlet_mask[v] {
                    0.0
                } else {
                    f(mesh.point(v))
                }
            })
            .collect();
        Self {
            values,
            dirichlet_mask,
        }
    }

    /// Values on the free vertices, in vertex order.
    pub fn from_free(mesh: &Mesh, free: &[f64]) -> Result<Self, FemError> {
        let mut out = Self::zeros(mesh);
        let n_free = out.dirichlet_mask.iter().filter(|d| !**d).count();
        if free.len() != n_free {
            return Err(FemError::FieldLength {
                expected: n_free,
                got: free.len(),
            });
        }
        let mut it = free.iter();
        for (v, d) in out.values.iter_mut().zip(&out.dirichlet_mask) {
            if !d {
                *v = *it.next().unwrap();
            }
        }
        Ok(out)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dirichlet_mask(&self) -> &[bool] {
        &self.dirichlet_mask
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn free_values(&self) -> Vec<f64> {
        self.values
            .iter()
            .zip(&self.dirichlet_mask)
            .filter(|(_, d)| !**d)
            .map(|(v, _)| *v)
            .collect()
    }

    /// Adds `step * delta` on the free vertices.
    pub fn add_free(&mut self, delta: &[f64], step: f64) {
        let mut it = delta.iter();
        for (v, d) in self.values.iter_mut().zip(&self.dirichlet_mask) {
            if !d {
                *v += step * it.next().expect("delta shorter than free vertex count");
            }
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &DiscreteField, beta: f64) -> DiscreteField {
        assert_eq!(self.len(), other.len(), "fields live on different meshes");
        DiscreteField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
            dirichlet_mask: self.dirichlet_mask.clone(),
        }
    }

    /// Applies `f(vertex, value)` on free vertices; Dirichlet values stay zero.
    pub fn map(&self, f: impl Fn(usize, f64) -> f64) -> DiscreteField {
        DiscreteField {
            values: self
                .values
                .iter()
                .zip(&self.dirichlet_mask)
                .enumerate()
                .map(|(v, (&x, &d))| if d { 0.0 } else { f(v, x) })
                .collect(),
            dirichlet_mask: self.dirichlet_mask.clone(),
        }
    }

    /// `self - other`.
    pub fn difference(&self, other: &DiscreteField) -> DiscreteField {
        self.combine(1.0, other, -1.0)
    }

    /// Largest nodal absolute difference.
    pub fn max_abs_diff(&self, other: &DiscreteField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Value at vertex `v`.
    pub fn at(&self, v: usize) -> f64 {
        self.values[v]
    }
}

pub fn write_field(field: &DiscreteField) -> String {
    let mut s = format!("field {}\n", field.len());
    for v in field.values() {
        s.push_str(&format!("{v:?}\n"));
    }
    s
}

/// Reads the values only; pair them with a mesh through [`DiscreteField::new`].
pub fn parse_field(text: &str) -> Result<Vec<f64>, FemError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(FemError::Parse {
        line: 1,
        message: "empty solution file".into(),
    })?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["field", n] => n.parse::<usize>().map_err(|e| FemError::Parse {
            line,
            message: format!("bad vertex count: {e}"),
        })?,
        _ => {
            return Err(FemError::Parse {
                line,
                message: "expected `field <vertex-count>`".into(),
            })
        }
    };
    let mut values = Vec::with_capacity(n);
    for (line, l) in lines {
        if values.len() == n {
            return Err(FemError::Parse {
                line,
                message: "trailing content after field values".into(),
            });
        }
        values.push(l.parse::<f64>().map_err(|e| FemError::Parse {
            line,
            message: format!("bad value `{l}`: {e}"),
        })?);
    }
    if values.len() != n {
        return Err(FemError::Parse {
            line: text.lines().count(),
            message: format!("expected {n} values, found {}", values.len()),
        });
    }
    Ok(values)
}

pub fn load_field(path: impl AsRef<Path>, mesh: &Mesh) -> Result<DiscreteField, FemError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| FemError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    DiscreteField::new(mesh, parse_field(&text)?)
}

pub fn save_field(path: impl AsRef<Path>, field: &DiscreteField) -> Result<(), FemError> {
    let path = path.as_ref();
    std::fs::write(path, write_field(field)).map_err(|e| FemError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{uniform_interval_mesh, EndCondition};

    fn mesh() -> Mesh {
        uniform_interval_mesh(0.0, 1.0, 4, EndCondition::dirichlet(), EndCondition::neumann(1.0))
            .unwrap()
            .into()
    }

    #[test]
    fn dirichlet_values_are_enforced() {
        let m = mesh();
        let f = DiscreteField::from_fn(&m, |x| 1.0 + x[0]);
        assert_eq!(f.values(), &[0.0, 1.25, 1.5, 1.75, 2.0]);
        assert_eq!(f.free_values().len(), 4);
        assert!(matches!(
            DiscreteField::new(&m, vec![1.0, 0.0, 0.0, 0.0, 0.0]),
            Err(FemError::DirichletValue { vertex: 0, .. })
        ));
        assert!(matches!(
            DiscreteField::new(&m, vec![0.0; 3]),
            Err(FemError::FieldLength { expected: 5, got: 3 })
        ));
    }

    #[test]
    fn text_round_trip() {
        let m = mesh();
        let f = DiscreteField::from_fn(&m, |x| (3.0 * x[0]).sin() / 7.0);
        let back = DiscreteField::new(&m, parse_field(&write_field(&f)).unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(parse_field("field 2\n1.0\n").is_err());
        assert!(parse_field("field 1\n1.0\n2.0\n").is_err());
        assert!(matches!(
            parse_field("vals 1\n1.0\n"),
            Err(FemError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn free_round_trip() {
        let m = mesh();
        let f = DiscreteField::from_free(&m, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.values(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        let mut g = f.clone();
        g.add_free(&[1.0; 4], 0.5);
        assert_eq!(g.max_abs_diff(&f), 0.5);
    }
}
