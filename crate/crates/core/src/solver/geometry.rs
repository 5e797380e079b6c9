//! Area, volume and log-length derivatives over flattened positions.

use nalgebra::{Matrix3, Vector3};

use crate::autodiff::{vec3, Dual2, Scalar};
use crate::dec::{DualForm1, DualForm2, SimplicialSurface};
use crate::error::{Error, Result};
use crate::sparse::SparseRow;
use crate::Point;

pub type Triplets = Vec<(usize, usize, f64)>;

/// Scalar value with per-vertex gradient.
#[derive(Clone, Debug)]
pub struct Measured {
    pub value: f64,
    pub gradient: DualForm2<Vector3<f64>>,
}

#[derive(Clone, Debug)]
pub struct AreaVolume {
    pub area: Measured,
    /// `None` on surfaces with boundary.
    pub volume: Option<Measured>,
}

fn face_vars(f: &[Point], tri: [usize; 3]) -> [[Dual2<9>; 3]; 3] {
    [0, 1, 2].map(|slot| [0, 1, 2].map(|c| Dual2::variable(f[tri[slot]][c], 3 * slot + c)))
}

fn triangle_area<S: Scalar>(p: [[S; 3]; 3]) -> S {
    let n = vec3::cross(vec3::sub(p[1], p[0]), vec3::sub(p[2], p[0]));
    vec3::dot(n, n).sqrt() * S::constant(0.5)
}

fn cone_volume<S: Scalar>(p: [[S; 3]; 3]) -> S {
    vec3::dot(p[0], vec3::cross(p[1], p[2])) / S::constant(6.0)
}

fn face_measure(
    surface: &SimplicialSurface,
    f: &[Point],
    kernel: impl Fn([[Dual2<9>; 3]; 3]) -> Dual2<9>,
    hessian: Option<(f64, &mut Triplets)>,
) -> Measured {
    let mut value = 0.0;
    let mut gradient = DualForm2::zeros(surface.vertex_count());
    let mut hessian = hessian;
    for &tri in surface.faces() {
        let d = kernel(face_vars(f, tri));
        value += d.v;
        for slot in 0..3 {
            gradient[tri[slot]] += Vector3::new(d.g[3 * slot], d.g[3 * slot + 1], d.g[3 * slot + 2]);
        }
        if let Some((scale, out)) = hessian.as_mut() {
            for a in 0..9 {
                for b in 0..9 {
                    if d.h[a][b] != 0.0 {
                        out.push((3 * tri[a / 3] + a % 3, 3 * tri[b / 3] + b % 3, *scale * d.h[a][b]));
                    }
                }
            }
        }
    }
    Measured { value, gradient }
}

pub fn area(surface: &SimplicialSurface, f: &[Point]) -> Measured {
    face_measure(surface, f, triangle_area, None)
}

/// Enclosed volume `(1/6) Σ ⟨f_i, f_j × f_k⟩`.
pub fn volume(surface: &SimplicialSurface, f: &[Point]) -> Result<Measured> {
    if !surface.is_closed() {
        return Err(Error::SurfaceHasBoundary);
    }
    Ok(face_measure(surface, f, cone_volume, None))
}

pub fn area_volume(surface: &SimplicialSurface, f: &[Point]) -> AreaVolume {
    AreaVolume {
        area: area(surface, f),
        volume: volume(surface, f).ok(),
    }
}

/// Appends `scale` times the area Hessian.
pub fn area_hessian(surface: &SimplicialSurface, f: &[Point], scale: f64, out: &mut Triplets) {
    face_measure(surface, f, triangle_area, Some((scale, out)));
}

/// Appends `scale` times the volume Hessian.
pub fn volume_hessian(surface: &SimplicialSurface, f: &[Point], scale: f64, out: &mut Triplets) {
    face_measure(surface, f, cone_volume, Some((scale, out)));
}

/// Row of `∂ log ℓ_e / ∂f` over flattened positions.
pub fn log_length_gradient(surface: &SimplicialSurface, f: &[Point], e: usize) -> [(usize, f64); 6] {
    let [a, b] = surface.edges()[e];
    let d = f[b] - f[a];
    let g = d / d.norm_squared();
    [
        (3 * a, -g.x),
        (3 * a + 1, -g.y),
        (3 * a + 2, -g.z),
        (3 * b, g.x),
        (3 * b + 1, g.y),
        (3 * b + 2, g.z),
    ]
}

/// Jacobian of `R log ℓ(f)` for a sparse row `R` over edges.
pub fn pull_back_row(surface: &SimplicialSurface, f: &[Point], row: &SparseRow) -> SparseRow {
    let mut entries = Vec::with_capacity(6 * row.nnz());
    for &(e, w) in row.entries() {
        entries.extend(log_length_gradient(surface, f, e).map(|(c, g)| (c, w * g)));
    }
    SparseRow::from_entries(entries)
}

/// Appends `Σ_e q_e ∇² log ℓ_e` scaled by `scale`.
pub fn log_length_hessian(surface: &SimplicialSurface, f: &[Point], q: &[f64], scale: f64, out: &mut Triplets) {
    for (e, &[a, b]) in surface.edges().iter().enumerate() {
        if q[e] == 0.0 {
            continue;
        }
        let d = f[b] - f[a];
        let n2 = d.norm_squared();
        let h: Matrix3<f64> = (Matrix3::identity() * n2 - d * d.transpose() * 2.0) / (n2 * n2) * (scale * q[e]);
        for r in 0..3 {
            for c in 0..3 {
                let v = h[(r, c)];
                out.push((3 * a + r, 3 * a + c, v));
                out.push((3 * b + r, 3 * b + c, v));
                out.push((3 * a + r, 3 * b + c, -v));
                out.push((3 * b + r, 3 * a + c, -v));
            }
        }
    }
}

/// `μ_ij = −q_ij df_ij / |df_ij|²`.
pub fn extrinsic_stress(surface: &SimplicialSurface, f: &[Point], q: &[f64]) -> Result<DualForm1<Vector3<f64>>> {
    crate::conformal::check_len(surface.edge_count(), q.len())?;
    let mut mu = DualForm1::zeros(surface.edge_count());
    for (e, &[a, b]) in surface.edges().iter().enumerate() {
        let d = f[b] - f[a];
        let n2 = d.norm_squared();
        if n2 == 0.0 {
            return Err(Error::ZeroLengthEdge(e));
        }
        mu[e] = -d * (q[e] / n2);
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;
    use crate::testing::jitter;

    #[test]
    fn unit_cube_measures() {
        let (s, f) = shapes::cube();
        let av = area_volume(&s, &f);
        assert!((av.area.value - 6.0).abs() < 1e-14);
        assert!((av.volume.unwrap().value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gradients_sum_to_zero_and_match_finite_differences() {
        let (s, f) = shapes::icosphere(1);
        let f = jitter(&f, 0.1, 3);
        let av = area_volume(&s, &f);
        let vol = av.volume.unwrap();
        let sum_a: Vector3<f64> = av.area.gradient.values().iter().sum();
        let sum_v: Vector3<f64> = vol.gradient.values().iter().sum();
        assert!(sum_a.norm() < 1e-13 && sum_v.norm() < 1e-13);
        let h = 1e-6;
        for v in [0, 7, 30] {
            for c in 0..3 {
                let (mut p, mut m) = (f.clone(), f.clone());
                p[v][c] += h;
                m[v][c] -= h;
                let fa = (area(&s, &p).value - area(&s, &m).value) / (2.0 * h);
                let fv = (volume(&s, &p).unwrap().value - volume(&s, &m).unwrap().value) / (2.0 * h);
                assert!((fa - av.area.gradient[v][c]).abs() <= 1e-6 * fa.abs().max(1.0));
                assert!((fv - vol.gradient[v][c]).abs() <= 1e-6 * fv.abs().max(1.0));
            }
        }
    }

    #[test]
    fn volume_needs_closed_surface() {
        let (s, f) = shapes::grid(2, 2);
        assert!(matches!(volume(&s, &f), Err(Error::SurfaceHasBoundary)));
    }

    #[test]
    fn stress_examples() {
        let s = SimplicialSurface::new(3, vec![[0, 1, 2]]).unwrap();
        let f = vec![Vector3::zeros(), Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 2.0, 0.0)];
        let (e01, _) = s.edge_between(0, 1).unwrap();
        let mut q = vec![0.0; 3];
        q[e01] = 1.0;
        let mu = extrinsic_stress(&s, &f, &q).unwrap();
        assert_eq!(mu[e01], Vector3::new(-1.0, 0.0, 0.0));
        let q = vec![0.3, -1.2, 2.5];
        let mu = extrinsic_stress(&s, &f, &q).unwrap();
        for (e, &[a, b]) in s.edges().iter().enumerate() {
            assert!((mu[e].dot(&(f[b] - f[a])) + q[e]).abs() < 1e-14);
        }
    }
}
