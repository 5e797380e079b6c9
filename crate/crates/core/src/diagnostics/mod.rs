//! Post-hoc certificates for immersions and solutions, and thin-tube
//! experiments.

mod tube;

pub use tube::{generate_tube, tube_invariants, Tube, TubeInvariants, TubeSpec};

use std::collections::BTreeMap;

use nalgebra::Vector3;

use crate::dec::{average, d_dual1, scale_dual1, wedge, d_primal0, average_adjoint, DualForm1, DualForm2, PrimalForm0, SimplicialSurface};
use crate::error::{Error, Result};
use crate::solver::extrinsic_stress;
use crate::willmore::{self, conservation_forms};
use crate::Point;

/// Largest residual of each conservation identity over the checked
/// vertices, divided by `‖grad 𝒲‖∞ + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationReport {
    pub tau: f64,
    pub sigma: f64,
    pub rho: f64,
    pub zeta: f64,
    pub gradient_norm: f64,
    /// Vertices at which the identities were evaluated.
    pub checked_vertices: usize,
}

impl ConservationReport {
    pub fn max(&self) -> f64 {
        self.tau.max(self.sigma).max(self.rho).max(self.zeta)
    }
}

/// Vertices whose whole closed star consists of interior edges. On closed
/// surfaces this is every vertex.
pub fn complete_star_vertices(surface: &SimplicialSurface) -> Vec<usize> {
    (0..surface.vertex_count())
        .filter(|&v| !surface.is_boundary_vertex(v) && surface.neighbors(v).iter().all(|&w| !surface.is_boundary_vertex(w)))
        .collect()
}

/// Checks `dτ = grad 𝒲`, `dσ = ⟨f, grad 𝒲⟩`, `dρ = f × grad 𝒲` and
/// `dζ = f × (f × grad 𝒲) + f⟨f, grad 𝒲⟩`. The right-hand sides use the
/// gradient obtained by differentiating the angle function directly.
pub fn conservation_report(surface: &SimplicialSurface, f: &[Point]) -> Result<ConservationReport> {
    let forms = conservation_forms(surface, f, false)?;
    let grad = willmore::willmore_gradient_ad(surface, f)?;
    let d_tau = d_dual1(surface, &forms.tau);
    let d_sigma = d_dual1(surface, &forms.sigma);
    let d_rho = d_dual1(surface, &forms.rho);
    let d_zeta = d_dual1(surface, &forms.zeta);
    let vertices = complete_star_vertices(surface);
    let gradient_norm = vertices.iter().fold(0.0f64, |m, &v| m.max(grad[v].norm()));
    let scale = gradient_norm + 1.0;
    let mut report = ConservationReport {
        tau: 0.0,
        sigma: 0.0,
        rho: 0.0,
        zeta: 0.0,
        gradient_norm,
        checked_vertices: vertices.len(),
    };
    for &v in &vertices {
        let (p, g) = (f[v], grad[v]);
        report.tau = report.tau.max((d_tau[v] - g).norm() / scale);
        report.sigma = report.sigma.max((d_sigma[v] - p.dot(&g)).abs() / scale);
        report.rho = report.rho.max((d_rho[v] - p.cross(&g)).norm() / scale);
        let z = p.cross(&p.cross(&g)) + p * p.dot(&g);
        report.zeta = report.zeta.max((d_zeta[v] - z).norm() / scale);
    }
    Ok(report)
}

/// Componentwise residual of `d(φα) = φ·dα + A*(dφ ∧ α)`, with `φα` the
/// product of the edge average of `φ` with `α`.
pub fn leibniz_residual(surface: &SimplicialSurface, phi: &PrimalForm0<f64>, alpha: &DualForm1<f64>) -> Result<f64> {
    crate::conformal::check_len(surface.vertex_count(), phi.len())?;
    crate::conformal::check_len(surface.edge_count(), alpha.len())?;
    let lhs = d_dual1(surface, &scale_dual1(&average(surface, phi), alpha, |a, b| a * b));
    let d_alpha = d_dual1(surface, alpha);
    let cross = average_adjoint(surface, &wedge(&d_primal0(surface, phi), alpha, |a, b| a * b));
    let rhs = DualForm2((0..surface.vertex_count()).map(|v| phi[v] * d_alpha[v] + cross[v]).collect());
    let scale = lhs.values().iter().chain(rhs.values()).fold(1.0f64, |m, x| m.max(x.abs()));
    Ok(lhs.values().iter().zip(rhs.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale)
}

/// Chain of dual edges, each named by the primal halfedge `(a, b)` it
/// crosses. The dual edge of `a → b` runs from the face right of `a → b`
/// to the face on its left.
pub type DualChain = Vec<(usize, usize)>;

/// Left and right faces of the halfedge `a → b`; `None` outside the surface.
fn sides(surface: &SimplicialSurface, a: usize, b: usize) -> Result<(Option<usize>, Option<usize>)> {
    let (e, sign) = surface.edge_between(a, b).ok_or_else(|| Error::Validation(format!("({a}, {b}) is not an edge")))?;
    let [fwd, bwd] = surface.edge_faces(e);
    Ok(if sign > 0.0 { (fwd, bwd) } else { (bwd, fwd) })
}

/// Errors with `OpenChain` unless every dual vertex, including the
/// exterior, is entered as often as it is left.
pub fn check_closed(surface: &SimplicialSurface, chain: &DualChain) -> Result<()> {
    let mut balance: BTreeMap<Option<usize>, i64> = BTreeMap::new();
    for &(a, b) in chain {
        let (left, right) = sides(surface, a, b)?;
        *balance.entry(left).or_default() += 1;
        *balance.entry(right).or_default() -= 1;
    }
    if balance.values().all(|&n| n == 0) {
        Ok(())
    } else {
        Err(Error::OpenChain)
    }
}

/// The boundary of the dual cells of `vertices`: every halfedge leaving
/// the set. Around a single vertex this is its dual cell boundary.
pub fn cycle_around(surface: &SimplicialSurface, vertices: &[usize]) -> DualChain {
    let inside: std::collections::BTreeSet<usize> = vertices.iter().copied().collect();
    let mut chain = Vec::new();
    for &v in &inside {
        for w in surface.neighbors(v) {
            if !inside.contains(&w) {
                chain.push((v, w));
            }
        }
    }
    chain
}

/// `∫_γ (τ − μ)` for each closed dual chain `γ`, with `μ` the extrinsic
/// stress of the edge multiplier `q`.
pub fn flux_class(
    surface: &SimplicialSurface,
    f: &[Point],
    q: &[f64],
    cycles: &[DualChain],
) -> Result<Vec<Vector3<f64>>> {
    let tau = willmore::willmore_flux(surface, f)?;
    let mu = extrinsic_stress(surface, f, q)?;
    cycles
        .iter()
        .map(|chain| {
            check_closed(surface, chain)?;
            let mut total = Vector3::zeros();
            for &(a, b) in chain {
                let (e, sign) = surface.edge_between(a, b).expect("checked edge");
                total += (tau[e] - mu[e]) * sign;
            }
            Ok(total)
        })
        .collect()
}
