//! Circle and sphere geometry of edge stencils via quaternion products of
//! unit edge vectors.

use nalgebra::Vector3;

use super::quaternion::{pure_inverse, Quaternion};
use crate::error::{Error, Result};

/// Threshold on `|sin β|` below which an edge circle is treated as degenerate.
pub const DEGENERATE_SIN: f64 = 1e-6;

/// Relative area below which a triangle counts as collinear.
pub const COLLINEAR_TOLERANCE: f64 = 1e-12;

/// Circle/sphere data of one interior edge `ij`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeCircle {
    /// Intersection angle of the two circumcircles, in `[0, π]`.
    pub beta: f64,
    /// Unit normal of the edge circumsphere at `f_i` (zero if degenerate).
    pub normal_i: Vector3<f64>,
    /// Unit normal of the edge circumsphere at `f_j` (zero if degenerate).
    pub normal_j: Vector3<f64>,
    /// Mean curvature `h = 2⟨n_i, df_ij⁻¹⟩` of the circumsphere.
    pub mean_curvature: f64,
    pub degenerate: bool,
}

fn unit(v: Vector3<f64>) -> Quaternion {
    Quaternion::pure(v / v.norm())
}

/// Unit tangent at `f_i` of the circle through `f_i, f_j, f_k`, oriented by
/// that ordering.
pub fn circumcircle_tangent(
    fi: &Vector3<f64>,
    fj: &Vector3<f64>,
    fk: &Vector3<f64>,
) -> Result<Vector3<f64>> {
    let (a, b, c) = (fj - fi, fk - fj, fi - fk);
    let longest = a.norm().max(b.norm()).max(c.norm());
    let area = 0.5 * a.cross(&c).norm();
    if !(longest > 0.0) || area < COLLINEAR_TOLERANCE * longest * longest {
        return Err(Error::DegenerateTriangle);
    }
    Ok((unit(a) * unit(b) * unit(c)).im)
}

/// Circle data for interior edge `ij` with incident faces `ijk` and `jil`.
pub fn edge_circle(
    fi: &Vector3<f64>,
    fl: &Vector3<f64>,
    fj: &Vector3<f64>,
    fk: &Vector3<f64>,
) -> Result<EdgeCircle> {
    let points = [fi, fl, fj, fk];
    for p in 0..4 {
        for q in p + 1..4 {
            if (points[p] - points[q]).norm_squared() == 0.0 {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    let il = unit(fl - fi);
    let lj = unit(fj - fl);
    let jk = unit(fk - fj);
    let ki = unit(fi - fk);

    let from_i = il * lj * jk * ki;
    let sin_beta = from_i.im.norm();
    let beta = sin_beta.atan2(-from_i.re);

    if sin_beta < DEGENERATE_SIN {
        return Ok(EdgeCircle {
            beta,
            normal_i: Vector3::zeros(),
            normal_j: Vector3::zeros(),
            mean_curvature: 0.0,
            degenerate: true,
        });
    }
    let from_j = jk * ki * il * lj;
    let normal_i = from_i.im / sin_beta;
    let normal_j = from_j.im / sin_beta;
    let mean_curvature = 2.0 * normal_i.dot(&pure_inverse(&(fj - fi)));
    Ok(EdgeCircle {
        beta,
        normal_i,
        normal_j,
        mean_curvature,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn v(x: f64, y: f64, z: f64) -> Vector3<f64> {
        Vector3::new(x, y, z)
    }

    fn random_point(rng: &mut ChaCha8Rng) -> Vector3<f64> {
        v(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    }

    /// Circumcenter of a triangle in space.
    fn circumcenter(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> Vector3<f64> {
        let (ab, ac) = (b - a, c - a);
        let n = ab.cross(&ac);
        a + (n.cross(&ab) * ac.norm_squared() + ac.cross(&n) * ab.norm_squared())
            / (2.0 * n.norm_squared())
    }

    #[test]
    fn tangent_of_half_unit_circle() {
        let t = circumcircle_tangent(&v(0.0, 0.0, 0.0), &v(1.0, 0.0, 0.0), &v(0.5, 0.5, 0.0)).unwrap();
        let center = circumcenter(&v(0.0, 0.0, 0.0), &v(1.0, 0.0, 0.0), &v(0.5, 0.5, 0.0));
        assert!((t.norm() - 1.0).abs() < 1e-15);
        assert!(t.dot(&center).abs() < 1e-15);
        assert!(t.z.abs() < 1e-15);
        // Counterclockwise traversal moves downward at the leftmost point.
        assert!((t - v(0.0, -1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tangent_of_equilateral_stays_in_plane() {
        let h = 3f64.sqrt() / 2.0;
        let t = circumcircle_tangent(&v(0.0, 0.0, 0.0), &v(1.0, 0.0, 0.0), &v(0.5, h, 0.0)).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-15);
        assert_eq!(t.z, 0.0);
    }

    #[test]
    fn triple_product_is_pure_and_tangent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (a, b, c) = (random_point(&mut rng), random_point(&mut rng), random_point(&mut rng));
            let q = unit(b - a) * unit(c - b) * unit(a - c);
            assert!(q.re.abs() < 1e-14);
            let t = circumcircle_tangent(&a, &b, &c).unwrap();
            let center = circumcenter(&a, &b, &c);
            let normal = (b - a).cross(&(c - a)).normalize();
            assert!(t.dot(&(center - a).normalize()).abs() < 1e-9);
            assert!(t.dot(&normal).abs() < 1e-12);
        }
    }

    #[test]
    fn collinear_triangle_is_rejected() {
        let err = circumcircle_tangent(&v(0.0, 0.0, 0.0), &v(1.0, 0.0, 0.0), &v(2.0, 0.0, 0.0));
        assert!(matches!(err, Err(Error::DegenerateTriangle)));
    }

    #[test]
    fn concircular_square_is_degenerate() {
        // Unit square with diagonal ij from (0,0) to (1,1); k and l on either side.
        let (fi, fj) = (v(0.0, 0.0, 0.0), v(1.0, 1.0, 0.0));
        let (fk, fl) = (v(0.0, 1.0, 0.0), v(1.0, 0.0, 0.0));
        let c = edge_circle(&fi, &fl, &fj, &fk).unwrap();
        assert!(c.beta.abs() < 1e-12);
        assert!(c.degenerate);
        assert_eq!(c.normal_i, Vector3::zeros());
    }

    #[test]
    fn regular_tetrahedron_angle() {
        let p = [
            v(1.0, 1.0, 1.0),
            v(1.0, -1.0, -1.0),
            v(-1.0, 1.0, -1.0),
            v(-1.0, -1.0, 1.0),
        ];
        // Faces 012 and 103 share edge 01 (i=0, j=1, k=2, l=3).
        let c = edge_circle(&p[0], &p[3], &p[1], &p[2]).unwrap();
        assert!((c.beta - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!(!c.degenerate);
    }

    #[test]
    fn angle_is_symmetric_and_sphere_data_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let p: Vec<_> = (0..4).map(|_| random_point(&mut rng)).collect();
            let (fi, fl, fj, fk) = (&p[0], &p[1], &p[2], &p[3]);
            let c = edge_circle(fi, fl, fj, fk).unwrap();
            let swapped = edge_circle(fj, fk, fi, fl).unwrap();
            assert!((c.beta - swapped.beta).abs() < 1e-12);
            assert!((0.0..=PI).contains(&c.beta));
            if c.degenerate {
                continue;
            }
            assert!((c.normal_i.norm() - 1.0).abs() < 1e-12);
            assert!((c.normal_j.norm() - 1.0).abs() < 1e-12);
            let h_j = 2.0 * c.normal_j.dot(&pure_inverse(&(fi - fj)));
            assert!((c.mean_curvature - h_j).abs() <= 1e-10 * c.mean_curvature.abs().max(1.0));
            // Swapping the edge direction swaps the endpoint normals.
            assert!((swapped.normal_i - c.normal_j).norm() < 1e-10);
        }
    }

    #[test]
    fn coincident_points_error() {
        let a = v(0.0, 0.0, 0.0);
        let err = edge_circle(&a, &a, &v(1.0, 0.0, 0.0), &v(0.0, 1.0, 0.0));
        assert!(matches!(err, Err(Error::CoincidentPoints)));
    }
}
