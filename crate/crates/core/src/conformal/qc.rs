//! Per-face quasi-conformal distortion against a reference metric.

use nalgebra::{Matrix2, Vector2};

use super::{check_len, DiscreteMetric};
use crate::dec::SimplicialSurface;
use crate::error::{Error, Result};
use crate::Point;

pub const HISTOGRAM_BINS: usize = 64;

/// Uniform bins over `[lo, hi]`; the last bin is closed.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Self {
        let mut counts = vec![0; bins];
        let width = (hi - lo) / bins as f64;
        for &v in values {
            let b = ((v - lo) / width).floor().clamp(0.0, (bins - 1) as f64) as usize;
            counts[b] += 1;
        }
        Self { lo, hi, counts }
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QcReport {
    /// `Q = σ₁/σ₂ ≥ 1` per face.
    pub per_face: Vec<f64>,
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub histogram: Histogram,
}

/// Planar layout of a triangle with side lengths `(ij, jk, ki)`, with `i` at
/// the origin and `j` on the positive x-axis.
fn layout(l_ij: f64, l_jk: f64, l_ki: f64) -> Option<(Vector2<f64>, Vector2<f64>)> {
    let x = (l_ij * l_ij + l_ki * l_ki - l_jk * l_jk) / (2.0 * l_ij);
    let y2 = l_ki * l_ki - x * x;
    let longest = l_ij.max(l_jk).max(l_ki);
    if !(y2 > 0.0) || 0.5 * l_ij * y2.sqrt() < 1e-12 * longest * longest {
        return None;
    }
    Some((Vector2::new(l_ij, 0.0), Vector2::new(x, y2.sqrt())))
}

fn singular_value_ratio(m: &Matrix2<f64>) -> f64 {
    // σ₁,₂² are the eigenvalues of MᵀM.
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let frob = a * a + b * b + c * c + d * d;
    let det = (a * d - b * c).abs();
    let disc = (frob * frob - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((frob + disc) / 2.0).sqrt();
    let s2 = det / s1;
    s1 / s2
}

/// Distortion of the affine map from the reference layout of each face to
/// the immersed triangle.
pub fn quasi_conformal_error(
    surface: &SimplicialSurface,
    f: &[Point],
    reference: &DiscreteMetric,
) -> Result<QcReport> {
    check_len(surface.vertex_count(), f.len())?;
    check_len(surface.edge_count(), reference.log_lengths.len())?;
    let mut per_face = Vec::with_capacity(surface.face_count());
    for tri in surface.faces() {
        let [i, j, k] = *tri;
        let l = |a: usize, b: usize| reference.length(surface.edge_between(a, b).expect("face edge").0);
        let (pj, pk) = layout(l(i, j), l(j, k), l(k, i)).ok_or(Error::DegenerateTriangle)?;

        let (ej, ek) = (f[j] - f[i], f[k] - f[i]);
        let n = ej.cross(&ek);
        let longest = ej.norm().max(ek.norm()).max((f[k] - f[j]).norm());
        if !(0.5 * n.norm() >= 1e-12 * longest * longest) {
            return Err(Error::DegenerateTriangle);
        }
        let e1 = ej.normalize();
        let e2 = n.cross(&ej).normalize();
        let qj = Vector2::new(ej.dot(&e1), ej.dot(&e2));
        let qk = Vector2::new(ek.dot(&e1), ek.dot(&e2));

        let p = Matrix2::from_columns(&[pj, pk]);
        let q = Matrix2::from_columns(&[qj, qk]);
        let m = q * p.try_inverse().ok_or(Error::DegenerateTriangle)?;
        per_face.push(singular_value_ratio(&m));
    }
    Ok(summarize(per_face))
}

fn summarize(per_face: Vec<f64>) -> QcReport {
    let mut sorted = per_face.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let (min, max) = (sorted.first().copied().unwrap_or(1.0), sorted.last().copied().unwrap_or(1.0));
    let median = if n == 0 {
        1.0
    } else if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let mean = if n == 0 { 1.0 } else { per_face.iter().sum::<f64>() / n as f64 };
    let histogram = Histogram::new(&per_face, 1.0, max.max(2.0), HISTOGRAM_BINS);
    QcReport {
        per_face,
        min,
        mean,
        median,
        max,
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::induced_metric;
    use nalgebra::Vector3;

    fn equilateral() -> (SimplicialSurface, Vec<Point>) {
        let s = SimplicialSurface::new(3, vec![[0, 1, 2]]).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let f = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.5, h, 0.0),
        ];
        (s, f)
    }

    #[test]
    fn isometric_image_is_conformal() {
        let (s, f) = equilateral();
        let reference = induced_metric(&s, &f).unwrap();
        let r = quasi_conformal_error(&s, &f, &reference).unwrap();
        assert!((r.max - 1.0).abs() < 1e-12);
        assert_eq!(r.histogram.counts[0], 1);
    }

    #[test]
    fn axis_stretch_doubles_q() {
        let (s, f) = equilateral();
        let reference = induced_metric(&s, &f).unwrap();
        let stretched: Vec<Point> = f.iter().map(|p| Vector3::new(2.0 * p.x, p.y, 0.0)).collect();
        let r = quasi_conformal_error(&s, &stretched, &reference).unwrap();
        assert!((r.per_face[0] - 2.0).abs() < 1e-12);
        let scaled: Vec<Point> = stretched.iter().map(|p| p * 7.5).collect();
        let r2 = quasi_conformal_error(&s, &scaled, &reference).unwrap();
        assert!((r2.per_face[0] - 2.0).abs() < 1e-12);
        assert_eq!(*r.histogram.counts.last().unwrap(), 1);
    }

    #[test]
    fn collinear_image_is_rejected() {
        let (s, f) = equilateral();
        let reference = induced_metric(&s, &f).unwrap();
        let flat = vec![f[0], f[1], Vector3::new(2.0, 0.0, 0.0)];
        assert!(matches!(
            quasi_conformal_error(&s, &flat, &reference),
            Err(Error::DegenerateTriangle)
        ));
    }
}
