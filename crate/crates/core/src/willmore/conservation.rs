//! Conservation-law forms associated with the Möbius symmetries of the
//! energy: translations (τ), scalings (σ), rotations (ρ) and inversions (ζ).

use nalgebra::Vector3;

use super::{edge_circles, weighted_flux};
use crate::conformal::cross_ratio_row;
use crate::dec::{pure_inverse, DualForm1, EdgeForm0, SimplicialSurface};
use crate::error::{Error, Result};
use crate::Point;

#[derive(Clone, Debug)]
pub struct ConservationForms {
    pub tau: DualForm1<Vector3<f64>>,
    pub sigma: DualForm1<f64>,
    pub rho: DualForm1<Vector3<f64>>,
    pub zeta: DualForm1<Vector3<f64>>,
    /// Edge midpoints.
    pub midpoints: EdgeForm0<Vector3<f64>>,
    /// Mean curvature of each edge circumsphere (zero on boundary and
    /// degenerate edges).
    pub h: EdgeForm0<f64>,
    /// `H = C h` on interior edges, zero on boundary edges.
    pub big_h: EdgeForm0<f64>,
}

/// Builds all four forms with unit stencil weight 2, so that `dτ` is the
/// gradient of `2 Σ_{e∈E₀} β_e`. With `strict`, surfaces with boundary are
/// rejected.
pub fn conservation_forms(surface: &SimplicialSurface, f: &[Point], strict: bool) -> Result<ConservationForms> {
    if strict && !surface.is_closed() {
        return Err(Error::SurfaceHasBoundary);
    }
    let circles = edge_circles(surface, f)?;
    let tau = weighted_flux(surface, f, &circles, &vec![2.0; surface.edge_count()]);

    let h = EdgeForm0(
        surface
            .edges()
            .iter()
            .zip(&circles)
            .map(|(&[a, b], c)| match c {
                Some(c) if !c.degenerate => 2.0 * c.normal_i.dot(&pure_inverse(&(f[b] - f[a]))),
                _ => 0.0,
            })
            .collect(),
    );
    let big_h = EdgeForm0(
        (0..surface.edge_count())
            .map(|e| {
                if surface.is_interior_edge(e) {
                    cross_ratio_row(surface, e).dot(h.values())
                } else {
                    0.0
                }
            })
            .collect(),
    );

    let n = surface.edge_count();
    let (mut sigma, mut rho, mut zeta) = (DualForm1::zeros(n), DualForm1::zeros(n), DualForm1::zeros(n));
    let mut midpoints = EdgeForm0::zeros(n);
    for (e, &[a, b]) in surface.edges().iter().enumerate() {
        let (fi, fj) = (f[a], f[b]);
        let mid = (fi + fj) * 0.5;
        let df = fj - fi;
        let t = tau[e];
        let hdf = df * big_h[e];
        midpoints[e] = mid;
        sigma[e] = mid.dot(&t);
        rho[e] = mid.cross(&t) + hdf * 0.5;
        zeta[e] = (fi.cross(&fj.cross(&t)) + fj.cross(&fi.cross(&t))) * 0.5 + mid * mid.dot(&t) + mid.cross(&hdf);
    }
    Ok(ConservationForms {
        tau,
        sigma,
        rho,
        zeta,
        midpoints,
        h,
        big_h,
    })
}
