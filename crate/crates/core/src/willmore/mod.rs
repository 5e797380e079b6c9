//! The discrete Willmore energy, its flux form and exact derivatives.
//!
//! `𝒲 = Σ_{i∈V₀} (Σ_j β_ij − 2π)` where `β_ij` is the circumcircle
//! intersection angle at interior edge `ij`. Regrouping by edges gives
//! `𝒲 = Σ_e w_e β_e − 2π|V₀|` with `w_e` the number of interior endpoints of
//! `e`, so that on closed meshes `w_e = 2` throughout.

mod conservation;

pub use conservation::{conservation_forms, ConservationForms};

use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::autodiff::{vec3, Dual2, Scalar};
use crate::dec::{d_dual1, edge_circle, pure_inverse, DualForm1, DualForm2, EdgeCircle, SimplicialSurface};
use crate::error::Result;
use crate::Point;

#[derive(Clone, Debug)]
pub struct WillmoreReport {
    /// `W_i` per vertex, zero at boundary vertices.
    pub integrand: DualForm2<f64>,
    pub total: f64,
    /// Flux form whose dual derivative is the energy gradient.
    pub flux: DualForm1<Vector3<f64>>,
    /// `β` per edge (zero on boundary edges).
    pub beta: Vec<f64>,
    pub degenerate_edges: usize,
}

/// Circle data of every interior edge; `None` on boundary edges.
pub fn edge_circles(surface: &SimplicialSurface, f: &[Point]) -> Result<Vec<Option<EdgeCircle>>> {
    crate::conformal::check_len(surface.vertex_count(), f.len())?;
    (0..surface.edge_count())
        .map(|e| match surface.interior_stencil(e) {
            Some(s) => edge_circle(&f[s.i], &f[s.l], &f[s.j], &f[s.k]).map(Some),
            None => Ok(None),
        })
        .collect()
}

/// Edge weights for which `Σ_e w_e β_e` is the energy up to a constant.
pub fn energy_weights(surface: &SimplicialSurface) -> Vec<f64> {
    (0..surface.edge_count())
        .map(|e| surface.interior_endpoint_count(e) as f64)
        .collect()
}

/// `τ = −Σ_e w_e ∂β_e/∂(df)`, accumulated stencil by stencil.
pub(crate) fn weighted_flux(
    surface: &SimplicialSurface,
    f: &[Point],
    circles: &[Option<EdgeCircle>],
    weights: &[f64],
) -> DualForm1<Vector3<f64>> {
    let mut tau = DualForm1::zeros(surface.edge_count());
    for (e, circle) in circles.iter().enumerate() {
        let Some(c) = circle else { continue };
        let w = weights[e];
        if c.degenerate || w == 0.0 {
            continue;
        }
        let s = surface.interior_stencil(e).expect("interior edge");
        let inv = |p: usize, q: usize| pure_inverse(&(f[q] - f[p]));
        tau.add_oriented(surface, s.i, s.l, inv(s.i, s.l).cross(&c.normal_i) * w);
        tau.add_oriented(surface, s.l, s.j, -inv(s.l, s.j).cross(&c.normal_j) * w);
        tau.add_oriented(surface, s.j, s.k, inv(s.j, s.k).cross(&c.normal_j) * w);
        tau.add_oriented(surface, s.k, s.i, -inv(s.k, s.i).cross(&c.normal_i) * w);
    }
    tau
}

pub fn willmore_energy(surface: &SimplicialSurface, f: &[Point]) -> Result<WillmoreReport> {
    let circles = edge_circles(surface, f)?;
    let beta: Vec<f64> = circles.iter().map(|c| c.map_or(0.0, |c| c.beta)).collect();
    let mut integrand = DualForm2::zeros(surface.vertex_count());
    for v in surface.interior_vertices() {
        integrand[v] = surface.vertex_edges(v).iter().map(|&e| beta[e]).sum::<f64>() - 2.0 * PI;
    }
    let total = integrand.values().iter().sum();
    let flux = weighted_flux(surface, f, &circles, &energy_weights(surface));
    let degenerate_edges = circles.iter().flatten().filter(|c| c.degenerate).count();
    Ok(WillmoreReport {
        integrand,
        total,
        flux,
        beta,
        degenerate_edges,
    })
}

pub fn willmore_flux(surface: &SimplicialSurface, f: &[Point]) -> Result<DualForm1<Vector3<f64>>> {
    let circles = edge_circles(surface, f)?;
    Ok(weighted_flux(surface, f, &circles, &energy_weights(surface)))
}

/// `grad 𝒲 = dτ`.
pub fn willmore_gradient(surface: &SimplicialSurface, f: &[Point]) -> Result<DualForm2<Vector3<f64>>> {
    Ok(d_dual1(surface, &willmore_flux(surface, f)?))
}

/// `β` of the stencil `(f_i, f_l, f_j, f_k)` over any scalar type.
pub fn stencil_angle<S: Scalar>(fi: [S; 3], fl: [S; 3], fj: [S; 3], fk: [S; 3]) -> S {
    let hat = |p: [S; 3], q: [S; 3]| (S::constant(0.0), vec3::normalize(vec3::sub(q, p)));
    let q = vec3::qmul(
        vec3::qmul(vec3::qmul(hat(fi, fl), hat(fl, fj)), hat(fj, fk)),
        hat(fk, fi),
    );
    vec3::dot(q.1, q.1).sqrt().atan2(-q.0)
}

/// Value, gradient and Hessian of `β` for interior edge `e` with respect to
/// the coordinates of `(f_i, f_l, f_j, f_k)`, in that order.
pub fn stencil_angle_derivatives(surface: &SimplicialSurface, f: &[Point], e: usize) -> Option<([usize; 4], Dual2<12>)> {
    let s = surface.interior_stencil(e)?;
    let verts = [s.i, s.l, s.j, s.k];
    let var = |slot: usize| -> [Dual2<12>; 3] {
        let p = f[verts[slot]];
        [0, 1, 2].map(|c| Dual2::variable(p[c], 3 * slot + c))
    };
    Some((verts, stencil_angle(var(0), var(1), var(2), var(3))))
}

/// Energy gradient by automatic differentiation of every stencil angle,
/// independent of the flux form.
pub fn willmore_gradient_ad(surface: &SimplicialSurface, f: &[Point]) -> Result<DualForm2<Vector3<f64>>> {
    let circles = edge_circles(surface, f)?;
    let weights = energy_weights(surface);
    let mut grad = DualForm2::zeros(surface.vertex_count());
    for (e, circle) in circles.iter().enumerate() {
        match circle {
            Some(c) if !c.degenerate && weights[e] != 0.0 => {}
            _ => continue,
        }
        let (verts, d) = stencil_angle_derivatives(surface, f, e).expect("interior edge");
        for (slot, &v) in verts.iter().enumerate() {
            grad[v] += Vector3::new(d.g[3 * slot], d.g[3 * slot + 1], d.g[3 * slot + 2]) * weights[e];
        }
    }
    Ok(grad)
}

/// Triplets `(row, col, value)` of `scale` times the energy Hessian
/// over the flattened positions `3v + c`. Degenerate stencils contribute
/// nothing, matching the zeroed gradient there.
pub fn willmore_hessian(surface: &SimplicialSurface, f: &[Point], scale: f64) -> Result<Vec<(usize, usize, f64)>> {
    let circles = edge_circles(surface, f)?;
    let weights = energy_weights(surface);
    let mut out = Vec::new();
    for (e, circle) in circles.iter().enumerate() {
        match circle {
            Some(c) if !c.degenerate && weights[e] != 0.0 => {}
            _ => continue,
        }
        let (verts, d) = stencil_angle_derivatives(surface, f, e).expect("interior edge");
        let w = scale * weights[e];
        for a in 0..12 {
            for b in 0..12 {
                let v = d.h[a][b];
                if v != 0.0 {
                    out.push((3 * verts[a / 3] + a % 3, 3 * verts[b / 3] + b % 3, w * v));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing as shapes;

    #[test]
    fn regular_tetrahedron_is_critical_with_zero_energy() {
        let (s, f) = crate::shapes::tetrahedron();
        let r = willmore_energy(&s, &f).unwrap();
        for &b in &r.beta {
            assert!((b - 2.0 * PI / 3.0).abs() < 1e-12);
        }
        assert!(r.total.abs() < 1e-10);
        let g = willmore_gradient(&s, &f).unwrap();
        assert!(g.values().iter().all(|v| v.norm() < 1e-10));
    }

    #[test]
    fn every_tetrahedron_is_inscribed_and_has_zero_energy() {
        let (s, f) = crate::shapes::tetrahedron();
        for seed in 0..20 {
            let g = shapes::jitter(&f, 0.4, seed);
            assert!(willmore_energy(&s, &g).unwrap().total.abs() < 1e-10);
        }
    }

    #[test]
    fn vertex_off_the_circumsphere_raises_energy() {
        let (s, mut f) = crate::shapes::icosphere(0);
        assert!(willmore_energy(&s, &f).unwrap().total.abs() < 1e-10);
        f[0] *= 1.3;
        assert!(willmore_energy(&s, &f).unwrap().total > 1e-3);
    }

    #[test]
    fn flux_is_orthogonal_to_edges_and_translation_invariant() {
        let (s, f) = shapes::perturbed_icosphere(1, 0.1, 5);
        let tau = willmore_flux(&s, &f).unwrap();
        for (e, &[a, b]) in s.edges().iter().enumerate() {
            let df = f[b] - f[a];
            assert!(tau[e].dot(&df).abs() < 1e-12 * tau[e].norm().max(1.0) * df.norm());
        }
        let shift = Vector3::new(0.3, -2.0, 1.1);
        let moved: Vec<Point> = f.iter().map(|p| p + shift).collect();
        let tau2 = willmore_flux(&s, &moved).unwrap();
        let scaled: Vec<Point> = f.iter().map(|p| p * 4.0).collect();
        let tau3 = willmore_flux(&s, &scaled).unwrap();
        for e in 0..s.edge_count() {
            assert!((tau[e] - tau2[e]).norm() < 1e-10);
            assert!((tau[e] - tau3[e] * 4.0).norm() < 1e-10);
        }
    }

    #[test]
    fn flux_derivative_matches_autodiff() {
        let (s, f) = shapes::perturbed_icosphere(1, 0.15, 9);
        let g = willmore_gradient(&s, &f).unwrap();
        let g_ad = willmore_gradient_ad(&s, &f).unwrap();
        let total: Vector3<f64> = g.values().iter().sum();
        assert!(total.norm() < 1e-10);
        for v in 0..s.vertex_count() {
            assert!((g[v] - g_ad[v]).norm() < 1e-10, "vertex {v}: {} vs {}", g[v], g_ad[v]);
        }
    }

    #[test]
    fn boundary_gradient_is_exact() {
        let (s, f) = shapes::perturbed_disk(3, 0.2, 4);
        let g = willmore_gradient(&s, &f).unwrap();
        let h = 1e-6;
        for v in [0, 5, s.vertex_count() - 1] {
            for c in 0..3 {
                let (mut p, mut m) = (f.clone(), f.clone());
                p[v][c] += h;
                m[v][c] -= h;
                let fd = (willmore_energy(&s, &p).unwrap().total - willmore_energy(&s, &m).unwrap().total) / (2.0 * h);
                assert!((fd - g[v][c]).abs() < 1e-6, "vertex {v} coord {c}: {fd} vs {}", g[v][c]);
            }
        }
    }
}
