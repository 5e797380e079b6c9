mod common;

use std::f64::consts::PI;

use common::scenes;
use confspline::diagnostics::*;
use confspline::solver::*;
use nalgebra::Vector3;

fn circle(radius: f64) -> impl Fn(f64) -> confspline::Point {
    move |t| Vector3::new(radius * (2.0 * PI * t).cos(), radius * (2.0 * PI * t).sin(), 0.0)
}

fn torus_knot(t: f64) -> confspline::Point {
    let (p, q) = (2.0, 3.0);
    let s = 2.0 * PI * t;
    let r = 2.0 + (q * s).cos();
    Vector3::new(r * (p * s).cos(), r * (p * s).sin(), (q * s).sin())
}

fn seam(t: f64) -> confspline::Point {
    let s = 2.0 * PI * t;
    let theta = PI / 2.0 + 0.4 * (3.0 * s).sin() + 0.2 * (2.0 * s).cos();
    let phi = s + 0.3 * s.sin();
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

fn distance_to_turns(x: f64) -> f64 {
    (x - (x / (2.0 * PI)).round() * 2.0 * PI).abs()
}

#[test]
fn circle_tube_mesh_matches_the_thin_tube_integrals() {
    let (r, a) = (3.0, 0.2);
    let spec = TubeSpec::sample(circle(r), |_| a, 400, 48);
    let tube = generate_tube(&spec).unwrap();
    let inv = tube_invariants(&spec).unwrap();
    let measured = area_volume(&tube.surface, &tube.positions);
    let volume = measured.volume.unwrap().value;
    assert!((measured.area.value / inv.area - 1.0).abs() < 0.02);
    assert!((volume / inv.volume - 1.0).abs() < 0.02);
    assert!((inv.area / (4.0 * PI * PI * a * r) - 1.0).abs() < 0.02);
    assert!((inv.volume / (2.0 * PI * PI * a * a * r) - 1.0).abs() < 0.02);
}

#[test]
fn circle_quadrature_converges_at_second_order() {
    let exact = 2.0 * PI * 2.0 * (2.0 * PI * 0.3);
    let err = |n| (tube_invariants(&TubeSpec::sample(circle(2.0), |_| 0.3, n, 6)).unwrap().area - exact).abs();
    let (e1, e2, e3) = (err(50), err(100), err(200));
    for ratio in [e1 / e2, e2 / e3] {
        assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
    }
}

#[test]
fn spherical_curve_has_no_total_torsion() {
    let inv = tube_invariants(&TubeSpec::sample(seam, |_| 0.1, 400, 8)).unwrap();
    assert!(distance_to_turns(inv.re_tau) < 1e-3, "{}", inv.re_tau);
    assert!(distance_to_turns(inv.monodromy) < 1e-3);
}

#[test]
fn knot_monodromy_agrees_with_total_torsion() {
    let inv = tube_invariants(&TubeSpec::sample(torus_knot, |_| 0.2, 800, 8)).unwrap();
    assert!(inv.re_tau.abs() > 1.0);
    let gap = inv.re_tau - inv.monodromy - 2.0 * PI * inv.winding as f64;
    assert!(gap.abs() < 1e-3, "{inv:?}");

    // The frame closes up after distributing the monodromy.
    let tube = generate_tube(&TubeSpec::sample(torus_knot, |_| 0.2, 800, 8)).unwrap();
    assert_eq!(tube.surface.euler_characteristic(), 0);
    let e = (0..tube.surface.edge_count()).map(|e| {
        let [a, b] = tube.surface.edges()[e];
        (tube.positions[a] - tube.positions[b]).norm()
    });
    assert!(e.fold(0.0, f64::max) < 0.2);
}

#[test]
fn varying_thickness_integrals() {
    let a = |t: f64| 0.2 + 0.1 * (2.0 * PI * t).cos();
    let inv = tube_invariants(&TubeSpec::sample(circle(1.0), a, 2000, 6)).unwrap();
    // ∫ ds/a around the unit circle with a = 0.2 + 0.1 cos s is 2π/√(0.04 − 0.01).
    let exact = 2.0 * PI / (0.03f64).sqrt();
    assert!((inv.im_tau / exact - 1.0).abs() < 1e-4);
    // ∫ a ds = 0.4π.
    assert!((inv.area / (2.0 * PI * 0.4 * PI) - 1.0).abs() < 1e-4);
    // κ = 1: (π/2)(∫1/a + ½∫a).
    let willmore = 0.5 * PI * (exact + 0.5 * 0.4 * PI);
    assert!((inv.willmore / willmore - 1.0).abs() < 1e-4);
}

#[test]
fn fluxes_at_a_converged_solution() {
    let (s, f, cs) = scenes::pinned_sphere(2, 0.1);
    let sol = newton_solve(&s, &f, ConstraintSystem::new(&s, &cs).unwrap(), &SolverOptions::default()).unwrap();
    assert!(sol.converged());
    let x = &sol.state.positions;
    let q = sol.system.edge_multiplier(&sol.state.multipliers);
    let nu = sol.point_fluxes();
    let tolerance = 1e-8 * (1.0 + common::max_norm(&nu));

    // Around each knot the flux is the recovered multiplier.
    let punctures: Vec<_> = (0..12).map(|v| cycle_around(&s, &[v])).collect();
    let around = flux_class(&s, x, &q, &punctures).unwrap();
    for k in 0..12 {
        assert!((around[k] - nu[k]).norm() <= tolerance);
    }
    let total: Vector3<f64> = around.iter().sum();
    assert!(total.norm() <= tolerance);

    // A disk free of knots carries no flux, and neither does the cycle
    // after absorbing a free dual cell.
    let region: Vec<usize> = (12..s.vertex_count()).filter(|&v| (f[v] - f[40]).norm() < 0.5).collect();
    assert!(region.len() > 3);
    let disk = flux_class(&s, x, &q, &[cycle_around(&s, &region)]).unwrap();
    assert!(disk[0].norm() <= tolerance);

    let mut grown = vec![0];
    grown.extend(s.neighbors(0).into_iter().filter(|&v| v >= 12));
    let moved = flux_class(&s, x, &q, &[cycle_around(&s, &grown)]).unwrap();
    assert!((moved[0] - nu[0]).norm() <= tolerance);
}

#[test]
fn conservation_report_scales() {
    let (s, f) = confspline::shapes::icosphere(2);
    let f = common::jitter(&f, 0.04, 9);
    for scale in [0.1, 1.0, 10.0] {
        let g: Vec<_> = f.iter().map(|p| p * scale).collect();
        let r = conservation_report(&s, &g).unwrap();
        assert!(r.max() <= 1e-9, "{scale}: {r:?}");
    }
}
