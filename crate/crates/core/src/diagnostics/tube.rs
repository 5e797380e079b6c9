//! Tubes around closed space curves and their thin-tube invariants.

use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::dec::SimplicialSurface;
use crate::error::{Error, Result};
use crate::Point;

/// Closed centerline with a thickness per sample. The last sample connects
/// back to the first, so it must not repeat it.
#[derive(Clone, Debug)]
pub struct TubeSpec {
    pub centerline: Vec<Point>,
    pub thickness: Vec<f64>,
    /// Vertices per cross-section circle.
    pub circumferential: usize,
}

impl TubeSpec {
    /// Samples `curve` and `thickness` at `t = k/n`, `k = 0..n`.
    pub fn sample(
        curve: impl Fn(f64) -> Point,
        thickness: impl Fn(f64) -> f64,
        n: usize,
        circumferential: usize,
    ) -> Self {
        let t = |k: usize| k as f64 / n as f64;
        Self {
            centerline: (0..n).map(|k| curve(t(k))).collect(),
            thickness: (0..n).map(|k| thickness(t(k))).collect(),
            circumferential,
        }
    }

    /// Number of centerline samples.
    pub fn longitudinal(&self) -> usize {
        self.centerline.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.centerline.len();
        if n < 3 || self.circumferential < 3 {
            return Err(Error::Validation("tube needs at least 3 samples in each direction".into()));
        }
        crate::conformal::check_len(n, self.thickness.len())?;
        if let Some(k) = self.thickness.iter().position(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::Validation(format!("thickness at sample {k} is not positive")));
        }
        for k in 0..n {
            if self.centerline[k] == self.centerline[(k + n - 1) % n] {
                return Err(Error::DegenerateSample(k));
            }
        }
        Ok(())
    }

    fn segment(&self, k: usize) -> Vector3<f64> {
        let n = self.centerline.len();
        self.centerline[(k + 1) % n] - self.centerline[k]
    }

    /// Unit tangents by centered differences.
    fn tangents(&self) -> Vec<Vector3<f64>> {
        let n = self.centerline.len();
        (0..n)
            .map(|k| (self.segment(k) + self.segment((k + n - 1) % n)).normalize())
            .collect()
    }
}

/// Normals of the discrete rotation-minimizing frame, transported once
/// around by double reflection, and the monodromy angle in `(−π, π]`,
/// measured from the transported normal back to the initial one so that it
/// agrees with the total torsion modulo 2π.
fn parallel_normals(spec: &TubeSpec, tangents: &[Vector3<f64>]) -> (Vec<Vector3<f64>>, f64) {
    let n = spec.centerline.len();
    let t0 = tangents[0];
    let seed = if t0.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let r0 = (seed - t0 * t0.dot(&seed)).normalize();
    let mut normals = vec![r0];
    let mut r = r0;
    for k in 0..n {
        let (t, next) = (tangents[k], tangents[(k + 1) % n]);
        let v1 = spec.segment(k);
        let c1 = v1.norm_squared();
        let r_l = r - v1 * (2.0 / c1 * v1.dot(&r));
        let t_l = t - v1 * (2.0 / c1 * v1.dot(&t));
        let v2 = next - t_l;
        let c2 = v2.norm_squared();
        r = if c2 > 0.0 { r_l - v2 * (2.0 / c2 * v2.dot(&r_l)) } else { r_l };
        r = (r - next * next.dot(&r)).normalize();
        if k + 1 < n {
            normals.push(r);
        }
    }
    let monodromy = signed_angle(&r, &r0, &t0);
    (normals, monodromy)
}

/// Angle rotating `a` to `b` about `axis`, in `(−π, π]`.
fn signed_angle(a: &Vector3<f64>, b: &Vector3<f64>, axis: &Vector3<f64>) -> f64 {
    let angle = a.cross(b).dot(axis).atan2(a.dot(b));
    if angle == -PI {
        PI
    } else {
        angle
    }
}

/// Triangulated tube with `longitudinal × circumferential` vertices; vertex
/// `(k, j)` has index `k·m + j`.
#[derive(Clone, Debug)]
pub struct Tube {
    pub surface: SimplicialSurface,
    pub positions: Vec<Point>,
}

/// Builds the tube on a rotation-minimizing frame. The frame's monodromy is
/// spread evenly along the curve so the cross sections close up. Self
/// intersections are not detected.
pub fn generate_tube(spec: &TubeSpec) -> Result<Tube> {
    spec.validate()?;
    let (n, m) = (spec.longitudinal(), spec.circumferential);
    let tangents = spec.tangents();
    let (normals, monodromy) = parallel_normals(spec, &tangents);
    let mut positions = Vec::with_capacity(n * m);
    for k in 0..n {
        let t = tangents[k];
        let twist = monodromy * k as f64 / n as f64;
        let r = normals[k] * twist.cos() + t.cross(&normals[k]) * twist.sin();
        let b = t.cross(&r);
        for j in 0..m {
            let phi = 2.0 * PI * j as f64 / m as f64;
            positions.push(spec.centerline[k] + (r * phi.cos() + b * phi.sin()) * spec.thickness[k]);
        }
    }
    let id = |k: usize, j: usize| (k % n) * m + j % m;
    let mut faces = Vec::with_capacity(2 * n * m);
    for k in 0..n {
        for j in 0..m {
            let (a, b, c, d) = (id(k, j), id(k + 1, j), id(k + 1, j + 1), id(k, j + 1));
            faces.push([a, c, b]);
            faces.push([a, d, c]);
        }
    }
    Ok(Tube {
        surface: SimplicialSurface::new(n * m, faces)?,
        positions,
    })
}

/// Thin-tube approximations, all by the composite trapezoid rule over the
/// closed polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct TubeInvariants {
    /// `2π ∫ a ds`.
    pub area: f64,
    /// `π ∫ a² ds`.
    pub volume: f64,
    /// `(π/2) ∫ (1/a + aκ²/2) ds`.
    pub willmore: f64,
    /// Real part of the modulus: total torsion `Θ`, accumulated per
    /// segment.
    pub re_tau: f64,
    /// Imaginary part of the modulus: `∫ ds / a`.
    pub im_tau: f64,
    /// Rotation of the parallel frame after one loop, in `(−π, π]`.
    pub monodromy: f64,
    /// `(Θ − monodromy) / 2π`, rounded.
    pub winding: i64,
    pub length: f64,
}

fn trapezoid(spec: &TubeSpec, g: &[f64]) -> f64 {
    let n = spec.centerline.len();
    (0..n).map(|k| 0.5 * (g[k] + g[(k + 1) % n]) * spec.segment(k).norm()).sum()
}

/// Curvature of the circle through three consecutive samples.
fn curvatures(spec: &TubeSpec) -> Vec<f64> {
    let n = spec.centerline.len();
    (0..n)
        .map(|k| {
            let (e1, e2) = (spec.segment((k + n - 1) % n), spec.segment(k));
            2.0 * e1.cross(&e2).norm() / (e1.norm() * e2.norm() * (e1 + e2).norm())
        })
        .collect()
}

/// Sum over segments of the rotation between consecutive osculating
/// planes, taken as lines so that inflections do not add half turns.
fn total_torsion(spec: &TubeSpec) -> f64 {
    let n = spec.centerline.len();
    let binormal = |k: usize| spec.segment((k + n - 1) % n).cross(&spec.segment(k));
    let mut total = 0.0;
    for k in 0..n {
        let (b0, b1) = (binormal(k), binormal((k + 1) % n));
        if b0.norm_squared() == 0.0 || b1.norm_squared() == 0.0 {
            continue;
        }
        let axis = spec.segment(k).normalize();
        let (b0, b1) = (b0.normalize(), b1.normalize());
        let (sin, cos) = (b0.cross(&b1).dot(&axis), b0.dot(&b1));
        if cos != 0.0 {
            total += (sin / cos).atan();
        }
    }
    total
}

pub fn tube_invariants(spec: &TubeSpec) -> Result<TubeInvariants> {
    spec.validate()?;
    let a = &spec.thickness;
    let kappa = curvatures(spec);
    let n = a.len();
    let ones = vec![1.0; n];
    let sq: Vec<f64> = a.iter().map(|x| x * x).collect();
    let inv: Vec<f64> = a.iter().map(|x| 1.0 / x).collect();
    let bend: Vec<f64> = (0..n).map(|k| 1.0 / a[k] + 0.5 * a[k] * kappa[k] * kappa[k]).collect();
    let theta = total_torsion(spec);
    let (_, monodromy) = parallel_normals(spec, &spec.tangents());
    Ok(TubeInvariants {
        area: 2.0 * PI * trapezoid(spec, a),
        volume: PI * trapezoid(spec, &sq),
        willmore: 0.5 * PI * trapezoid(spec, &bend),
        re_tau: theta,
        im_tau: trapezoid(spec, &inv),
        monodromy,
        winding: ((theta - monodromy) / (2.0 * PI)).round() as i64,
        length: trapezoid(spec, &ones),
    })
}
