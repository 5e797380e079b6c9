mod common;

use confspline::conformal::{
    conformal_rescale, extended_cross_ratio, induced_metric, kernel_dimension, locally_constant_scales,
    numerical_nullity, quasi_conformal_error, scale_row, CrossRatioOperator,
};
use confspline::dec::PrimalForm0;
use confspline::shapes;
use confspline::solver::QuadraticDifferential;
use confspline::SimplicialSurface;

use common::{random_annulus, random_disk, random_values};

/// Random disks and annuli of at most 300 edges.
fn bounded_meshes() -> Vec<(SimplicialSurface, Vec<confspline::Point>)> {
    let mut out = Vec::new();
    for seed in 0..5 {
        out.push(random_disk(3 + seed as usize, 0.1, seed));
        out.push(random_annulus(2 + seed as usize % 3, 12 + 2 * seed as usize, 0.05, seed));
    }
    out
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn kernel_is_spanned_by_locally_constant_scales() {
    for (s, _) in bounded_meshes() {
        assert!(s.edge_count() <= 300);
        let expected = s.interior_vertex_count() + s.boundary_component_count();
        assert_eq!(kernel_dimension(&s, 1e-9), expected);

        let c = CrossRatioOperator::full(&s).matrix.to_dense();
        let ab = locally_constant_scales(&s);
        assert_eq!(ab.ncols(), expected);
        assert_eq!(numerical_nullity(&ab, 1e-9), 0);
        assert!((&c * &ab).amax() <= 1e-12);
    }
}

#[test]
fn closed_meshes_have_one_kernel_direction_per_vertex() {
    for (s, _) in [shapes::icosphere(1), shapes::cube(), shapes::uv_sphere(4, 5)] {
        assert_eq!(kernel_dimension(&s, 1e-9), s.vertex_count());
    }
}

#[test]
fn locally_constant_boundary_scales_preserve_every_row() {
    for (k, (s, f)) in bounded_meshes().into_iter().enumerate() {
        let lambda = induced_metric(&s, &f).unwrap();
        let xi = extended_cross_ratio(&s, &lambda).values;
        let per_component = random_values(s.boundary_component_count(), 0.05, k as u64);
        let interior = random_values(s.vertex_count(), 0.05, 100 + k as u64);
        let u = PrimalForm0(
            (0..s.vertex_count())
                .map(|v| s.boundary_component(v).map_or(interior[v], |b| per_component[b]))
                .collect(),
        );
        let moved = extended_cross_ratio(&s, &conformal_rescale(&s, &lambda, &u).unwrap()).values;
        let gap: Vec<f64> = xi.iter().zip(&moved).map(|(a, b)| a - b).collect();
        assert!(max_abs(&gap) <= 1e-12, "mesh {k}: {}", max_abs(&gap));
    }
}

#[test]
fn varying_boundary_scales_change_boundary_rows_only() {
    for (k, (s, f)) in bounded_meshes().into_iter().enumerate() {
        let lambda = induced_metric(&s, &f).unwrap();
        let xi = extended_cross_ratio(&s, &lambda).values;
        let u = PrimalForm0(random_values(s.vertex_count(), 0.05, 200 + k as u64));
        let moved = extended_cross_ratio(&s, &conformal_rescale(&s, &lambda, &u).unwrap()).values;
        let (mut interior, mut boundary) = (0.0f64, 0.0f64);
        for e in 0..s.edge_count() {
            let d = (xi[e] - moved[e]).abs();
            if s.is_interior_edge(e) {
                interior = interior.max(d);
            } else {
                boundary = boundary.max(d);
            }
        }
        assert!(interior <= 1e-12, "mesh {k}: {interior}");
        assert!(boundary > 1e-3, "mesh {k}: {boundary}");
    }
}

#[test]
fn transposed_image_has_vanishing_vertex_sums() {
    let mut meshes = bounded_meshes();
    meshes.push(shapes::icosphere(2));
    meshes.push(shapes::uv_sphere(5, 7));
    for (k, (s, _)) in meshes.into_iter().enumerate() {
        let op = CrossRatioOperator::full(&s);
        let mu = random_values(op.matrix.nrows(), 1.0, 300 + k as u64);
        let q = QuadraticDifferential(op.apply_transpose(&mu));
        let sums = q.vertex_sums(&s);
        for v in s.interior_vertices() {
            assert!(sums[v].abs() <= 1e-12, "mesh {k} vertex {v}: {}", sums[v]);
        }
        assert!(max_abs(&q.boundary_sums(&s)) <= 1e-12);
    }
}

#[test]
fn valence_six_scale_row() {
    let (s, _) = shapes::lattice(4, 4);
    let v = 12;
    assert_eq!(s.neighbors(v).len(), 6);
    let row = scale_row(&s, v);
    assert_eq!(row.nnz(), 12);
    // Spokes collect +1/6 from both adjacent faces, link edges −1/6 once.
    for &(e, c) in row.entries() {
        let spoke = s.edges()[e].contains(&v);
        let expected = if spoke { 1.0 / 3.0 } else { -1.0 / 6.0 };
        assert!((c - expected).abs() <= 1e-15, "{c}");
    }
}

#[test]
fn scale_rows_recover_uniform_scaling() {
    let (s, f) = common::random_disk(6, 0.1, 9);
    let lambda = induced_metric(&s, &f).unwrap();
    let scaled: Vec<_> = f.iter().map(|p| p * 3.0).collect();
    let lambda3 = induced_metric(&s, &scaled).unwrap();
    let u = confspline::conformal::scale_factors(&s, &lambda3, &lambda);
    for v in 0..s.vertex_count() {
        assert!((u[v] - 3f64.ln()).abs() <= 1e-12);
    }
}

#[test]
fn quasi_conformal_error_is_scale_invariant() {
    let (s, f) = common::random_disk(5, 0.2, 4);
    let reference = induced_metric(&s, &shapes::grid(5, 5).1).unwrap();
    let a = quasi_conformal_error(&s, &f, &reference).unwrap();
    let scaled: Vec<_> = f.iter().map(|p| p * 7.5).collect();
    let b = quasi_conformal_error(&s, &scaled, &reference).unwrap();
    for (x, y) in a.per_face.iter().zip(&b.per_face) {
        assert!((x - y).abs() <= 1e-12 * x);
    }
    assert!(a.min >= 1.0 && a.max > a.min);
    assert_eq!(a.histogram.counts.iter().sum::<usize>(), s.face_count());
}
