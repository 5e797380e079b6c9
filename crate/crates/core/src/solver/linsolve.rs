//! Sparse direct solve with a backward-error certificate.

use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use faer::prelude::*;

use super::geometry::Triplets;

/// Largest accepted normwise backward error.
pub const BACKWARD_ERROR_TOLERANCE: f64 = 1e-10;

const REFINEMENT_STEPS: usize = 3;

/// Square sparse matrix given by triplets; duplicates are summed.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    pub dim: usize,
    pub triplets: Triplets,
}

impl SparseSystem {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(r, c, v) in &self.triplets {
            out[r] += v * x[c];
        }
        out
    }

    /// `‖A‖∞`, bounded above by summing duplicate magnitudes.
    fn inf_norm(&self) -> f64 {
        let mut rows = vec![0.0; self.dim];
        for &(r, _, v) in &self.triplets {
            rows[r] += v.abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Normwise backward error `‖Ax − b‖∞ / (‖A‖∞‖x‖∞ + ‖b‖∞)`.
    pub fn backward_error(&self, x: &[f64], b: &[f64]) -> f64 {
        let r = self.apply(x);
        let res = r.iter().zip(b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let scale = self.inf_norm() * inf(x) + inf(b);
        if scale == 0.0 {
            res
        } else {
            res / scale
        }
    }
}

fn inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Solves `Ax = b` by sparse LU with iterative refinement. Returns `None`
/// when the factorization breaks down or the backward error stays above
/// [`BACKWARD_ERROR_TOLERANCE`].
pub fn solve(system: &SparseSystem, b: &[f64]) -> Option<Vec<f64>> {
    let n = system.dim;
    let trips: Vec<Triplet<usize, usize, f64>> = system
        .triplets
        .iter()
        .map(|&(r, c, v)| Triplet::new(r, c, v))
        .collect();
    let a = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trips).ok()?;
    let lu = a.sp_lu().ok()?;
    let solve_once = |rhs: &[f64]| -> Vec<f64> {
        let m = Mat::from_fn(n, 1, |i, _| rhs[i]);
        let x = lu.solve(&m);
        (0..n).map(|i| x[(i, 0)]).collect()
    };
    let mut x = solve_once(b);
    for _ in 0..REFINEMENT_STEPS {
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
        if system.backward_error(&x, b) <= BACKWARD_ERROR_TOLERANCE {
            return Some(x);
        }
        let ax = system.apply(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let dx = solve_once(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi += d;
        }
    }
    (x.iter().all(|v| v.is_finite()) && system.backward_error(&x, b) <= BACKWARD_ERROR_TOLERANCE).then_some(x)
}
