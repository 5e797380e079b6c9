//! Row-major sparse matrices for the linear operators over edge values.

use nalgebra::DMatrix;

/// One sparse row: sorted, duplicate-free `(column, value)` pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseRow(pub Vec<(usize, f64)>);

impl SparseRow {
    /// Sums duplicates, drops exact zeros and sorts by column.
    pub fn from_entries(mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by_key(|&(c, _)| c);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|&(_, v)| v != 0.0);
        Self(out)
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.0.iter().map(|&(c, v)| v * x[c]).sum()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseRows {
    pub rows: Vec<SparseRow>,
    pub cols: usize,
}

impl SparseRows {
    pub fn new(cols: usize) -> Self {
        Self {
            rows: Vec::new(),
            cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push(&mut self, row: SparseRow) {
        self.rows.push(row);
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        self.rows.iter().map(|r| r.dot(x)).collect()
    }

    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows.len());
        let mut out = vec![0.0; self.cols];
        for (r, &w) in self.rows.iter().zip(y) {
            if w == 0.0 {
                continue;
            }
            for &(c, v) in r.entries() {
                out[c] += v * w;
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, v) in r.entries() {
                m[(i, c)] = v;
            }
        }
        m
    }

    /// Stacks the rows of `other` below these.
    pub fn stack(&mut self, other: &SparseRows) {
        assert_eq!(self.cols, other.cols);
        self.rows.extend(other.rows.iter().cloned());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_merge_and_zeros_drop() {
        let r = SparseRow::from_entries(vec![(3, 1.0), (1, 2.0), (3, -1.0), (1, 0.5)]);
        assert_eq!(r.entries(), &[(1, 2.5)]);
    }

    #[test]
    fn transpose_is_adjoint() {
        let mut m = SparseRows::new(4);
        m.push(SparseRow::from_entries(vec![(0, 1.0), (2, -2.0)]));
        m.push(SparseRow::from_entries(vec![(1, 3.0), (3, 0.5), (0, 1.5)]));
        let x = [0.3, -1.0, 2.0, 4.0];
        let y = [1.7, -0.2];
        let lhs: f64 = m.apply(&x).iter().zip(&y).map(|(a, b)| a * b).sum();
        let rhs: f64 = m.apply_transpose(&y).iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-14);
    }
}
