//! Randomized fixtures shared by unit tests.

use nalgebra::Vector3;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::shapes::{self, Shape};
use crate::Point;

pub fn jitter(points: &[Point], amplitude: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points
        .iter()
        .map(|p| {
            p + Vector3::new(
                rng.random_range(-amplitude..amplitude),
                rng.random_range(-amplitude..amplitude),
                rng.random_range(-amplitude..amplitude),
            )
        })
        .collect()
}

pub fn perturbed_icosphere(level: usize, amplitude: f64, seed: u64) -> Shape {
    let (s, f) = shapes::icosphere(level);
    let f = jitter(&f, amplitude, seed);
    (s, f)
}

/// `n × n` grid with random diagonals, lifted off the plane.
pub fn perturbed_disk(n: usize, amplitude: f64, seed: u64) -> Shape {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flip: Vec<bool> = (0..n * n).map(|_| rng.random_range(0..2) == 1).collect();
    let (s, f) = shapes::grid_with_diagonals(n, n, &flip);
    let f = jitter(&f, amplitude, seed + 1);
    (s, f)
}
