#![allow(dead_code)]

use confspline::shapes::{self, Shape};
use confspline::Point;
use nalgebra::Vector3;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut ChaCha8Rng, amplitude: f64) -> Vector3<f64> {
    Vector3::new(
        rng.random_range(-amplitude..amplitude),
        rng.random_range(-amplitude..amplitude),
        rng.random_range(-amplitude..amplitude),
    )
}

pub fn jitter(points: &[Point], amplitude: f64, seed: u64) -> Vec<Point> {
    let mut r = rng(seed);
    points.iter().map(|p| p + random_vector(&mut r, amplitude)).collect()
}

pub fn random_values(n: usize, amplitude: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| r.random_range(-amplitude..amplitude)).collect()
}

/// `n × n` grid with random diagonals, lifted off the plane.
pub fn random_disk(n: usize, amplitude: f64, seed: u64) -> Shape {
    let mut r = rng(seed);
    let flip: Vec<bool> = (0..n * n).map(|_| r.random_range(0..2) == 1).collect();
    let (s, f) = shapes::grid_with_diagonals(n, n, &flip);
    (s, jitter(&f, amplitude, seed + 1))
}

pub fn random_annulus(radial: usize, angular: usize, amplitude: f64, seed: u64) -> Shape {
    let (s, f) = shapes::annulus(radial, angular, 1.0, 2.0);
    (s, jitter(&f, amplitude, seed))
}

pub fn max_norm(values: &[Vector3<f64>]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.norm()))
}

pub mod scenes {
    use confspline::conformal::{induced_metric, ScaleMode};
    use confspline::shapes;
    use confspline::solver::{ConstraintSet, FluxConstraint, Objective, PointConstraint, ScaleConstraint};
    use confspline::{Point, SimplicialSurface};

    pub type Scene = (SimplicialSurface, Vec<Point>, ConstraintSet);

    /// 4×4 patch of the triangle lattice, its own conformal class, corners
    /// pinned in place.
    pub fn flat_grid() -> Scene {
        let (s, f) = shapes::lattice(4, 4);
        let mut cs = ConstraintSet::new(Objective::Willmore).with_conformal_class(&s, &induced_metric(&s, &f).unwrap());
        for v in [0, 4, 20, 24] {
            cs.points.push(PointConstraint { vertex: v, target: f[v] });
        }
        (s, f, cs)
    }

    /// Icosphere with its own conformal class and the twelve icosahedral
    /// vertices pinned; the first target is pushed out radially by `push`.
    pub fn pinned_sphere(level: usize, push: f64) -> Scene {
        let (s, f) = shapes::icosphere(level);
        let mut cs = ConstraintSet::new(Objective::Willmore).with_conformal_class(&s, &induced_metric(&s, &f).unwrap());
        for v in 0..12 {
            cs.points.push(PointConstraint { vertex: v, target: f[v] });
        }
        cs.points[0].target *= 1.0 + push;
        (s, f, cs)
    }

    /// Opposite fluxes `±strength` along the axis through vertex 0 and its
    /// antipode, with the conformal class and total area held fixed.
    pub fn axis_flux(level: usize, strength: f64) -> Scene {
        let (s, f) = shapes::icosphere(level);
        let b = antipode(&f, 0);
        let axis = (f[0] - f[b]).normalize();
        let mut cs = ConstraintSet::new(Objective::Willmore).with_conformal_class(&s, &induced_metric(&s, &f).unwrap());
        cs.fluxes.push(FluxConstraint { vertex: 0, flux: axis * strength });
        cs.fluxes.push(FluxConstraint { vertex: b, flux: -axis * strength });
        cs.area = Some(confspline::solver::area(&s, &f).value);
        (s, f, cs)
    }

    pub fn antipode(f: &[Point], v: usize) -> usize {
        (0..f.len())
            .min_by(|&i, &j| (f[i] + f[v]).norm().total_cmp(&(f[j] + f[v]).norm()))
            .unwrap()
    }

    /// Pinned sphere with scale `u` prescribed on the link of pinned vertex 5.
    pub fn link_sphere(level: usize, u: f64) -> Scene {
        let (s, f, mut cs) = pinned_sphere(level, 0.0);
        cs.reference = Some(induced_metric(&s, &f).unwrap());
        cs.scales.push(ScaleConstraint { vertex: 5, value: u, mode: ScaleMode::Link });
        (s, f, cs)
    }

    /// Pinned sphere with a pushed knot and `u = 0` on unpinned vertices
    /// within `radius` of vertex 3.
    pub fn scale_region(level: usize, radius: f64) -> (Scene, Vec<usize>) {
        let (s, f, mut cs) = pinned_sphere(level, 0.1);
        cs.reference = Some(induced_metric(&s, &f).unwrap());
        let marked: Vec<usize> = (12..s.vertex_count()).filter(|&v| (f[v] - f[3]).norm() < radius).collect();
        for &v in &marked {
            cs.scales.push(ScaleConstraint { vertex: v, value: 0.0, mode: ScaleMode::Vertex });
        }
        ((s, f, cs), marked)
    }
}
