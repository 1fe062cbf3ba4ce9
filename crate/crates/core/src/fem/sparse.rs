//! Compressed sparse row storage over the free vertices.

use crate::mesh::Mesh;

/// Map between mesh vertices and free (non-Dirichlet) degrees of freedom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    /// Free vertex ids in increasing order; position is the dof index.
    pub free: Vec<usize>,
    /// `index[v]` is the dof of vertex `v`, `None` on Dirichlet vertices.
    pub index: Vec<Option<usize>>,
}

impl DofMap {
    pub fn from_mask(mask: &[bool]) -> Self {
        let mut free = Vec::new();
        let index = mask
            .iter()
            .enumerate()
            .map(|(v, &d)| {
                if d {
                    None
                } else {
                    free.push(v);
                    Some(free.len() - 1)
                }
            })
            .collect();
        Self { free, index }
    }

    pub fn new(mesh: &Mesh) -> Self {
        Self::from_mask(&mesh.dirichlet_mask())
    }

    pub fn len(&self) -> usize {
        self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Square `n x n` matrix from `(row, col, value)` triplets. Duplicates are
    /// summed in input order, so the result does not depend on thread count.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        // Stable sort keeps input order among duplicates.
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last = None;
        for (r, c, v) in triplets {
            assert!(r < n && c < n, "triplet ({r}, {c}) outside {n}x{n}");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_triplets(n, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    /// Whether `(r, c)` is stored, even with value zero.
    pub fn is_stored(&self, r: usize, c: usize) -> bool {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span].binary_search(&c).is_ok()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|r| self.row(r).map(|(c, v)| v * x[c]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (r, c, v) in self.entries() {
            d[r][c] = v;
        }
        d
    }

    /// `alpha * self + beta * other`, over the union of both patterns.
    pub fn add(&self, alpha: f64, other: &CsrMatrix, beta: f64) -> CsrMatrix {
        assert_eq!(self.n, other.n);
        let t = self
            .entries()
            .map(|(r, c, v)| (r, c, alpha * v))
            .chain(other.entries().map(|(r, c, v)| (r, c, beta * v)))
            .collect();
        CsrMatrix::from_triplets(self.n, t)
    }

    pub fn transpose(&self) -> CsrMatrix {
        CsrMatrix::from_triplets(self.n, self.entries().map(|(r, c, v)| (c, r, v)).collect())
    }
}

/// A linear system over the free vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub dof_map: DofMap,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let m = CsrMatrix::from_triplets(
            3,
            vec![(2, 0, 1.0), (0, 0, 2.0), (2, 0, 0.5), (1, 2, -1.0), (0, 0, 1.0)],
        );
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(2, 0), 1.5);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.matvec(&[1.0, 1.0, 2.0]), vec![3.0, -2.0, 1.5]);
        assert_eq!(m.transpose().get(0, 2), 1.5);
        assert_eq!(m.add(1.0, &m, -1.0).get(0, 0), 0.0);
    }

    #[test]
    fn dof_map_skips_dirichlet() {
        let d = DofMap::from_mask(&[true, false, false, true, false]);
        assert_eq!(d.free, vec![1, 2, 4]);
        assert_eq!(d.index, vec![None, Some(0), Some(1), None, Some(2)]);
    }
}
