//! Constrained Willmore (or area) minimization by damped Newton iteration on
//! the full KKT system.
//!
//! Every constraint is an equality `c(f) = 0` with its own multiplier. Rows
//! linear in `log ℓ` (conformal class and scale factors) pull back to vertex
//! forces through the extrinsic stress `μ = −q df/|df|²` with `q = Rᵀλ`.
//! Point constraints keep an explicit ℝ³ multiplier, which is the flux `ν`
//! recovered at that vertex.

mod geometry;
mod linsolve;
mod newton;
mod system;

pub use geometry::{
    area, area_hessian, area_volume, extrinsic_stress, log_length_hessian, volume, volume_hessian, AreaVolume,
    Measured, Triplets,
};
pub use linsolve::{solve as sparse_solve, SparseSystem, BACKWARD_ERROR_TOLERANCE};
pub use newton::{newton_solve, IterationRecord, Solution, SolverOptions, SolverState, Termination};
pub use system::ConstraintSystem;

use nalgebra::Vector3;

use crate::conformal::{ConformalClass, CrossRatioOperator, DiscreteMetric, ScaleMode};
use crate::dec::{DualForm2, SimplicialSurface};
use crate::error::{Error, Result};
use crate::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Willmore,
    Area,
}

/// Target conformal class with a per-boundary-component switch for the
/// half cross ratio rows.
#[derive(Clone, Debug)]
pub struct ConformalTarget {
    pub class: ConformalClass,
    pub boundary_active: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointConstraint {
    pub vertex: usize,
    pub target: Point,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleConstraint {
    pub vertex: usize,
    /// Prescribed scale factor `u` relative to the reference metric.
    pub value: f64,
    pub mode: ScaleMode,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxConstraint {
    pub vertex: usize,
    pub flux: Vector3<f64>,
}

#[derive(Clone, Debug)]
pub struct ConstraintSet {
    pub objective: Objective,
    pub conformal: Option<ConformalTarget>,
    pub points: Vec<PointConstraint>,
    pub scales: Vec<ScaleConstraint>,
    /// Reference metric of the scale constraints.
    pub reference: Option<DiscreteMetric>,
    pub fluxes: Vec<FluxConstraint>,
    /// Pairs of vertices glued to the same position.
    pub identifications: Vec<(usize, usize)>,
    pub area: Option<f64>,
    pub volume: Option<f64>,
}

impl ConstraintSet {
    pub fn new(objective: Objective) -> Self {
        Self {
            objective,
            conformal: None,
            points: Vec::new(),
            scales: Vec::new(),
            reference: None,
            fluxes: Vec::new(),
            identifications: Vec::new(),
            area: None,
            volume: None,
        }
    }

    /// Conformal class of `lambda` with every boundary row active.
    pub fn with_conformal_class(mut self, surface: &SimplicialSurface, lambda: &DiscreteMetric) -> Self {
        self.conformal = Some(ConformalTarget {
            class: crate::conformal::extended_cross_ratio(surface, lambda),
            boundary_active: vec![true; surface.boundary_component_count()],
        });
        self
    }

    pub fn validate(&self, surface: &SimplicialSurface) -> Result<()> {
        let n = surface.vertex_count();
        let check = |v: usize| {
            if v < n {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange { index: v, count: n })
            }
        };
        let mut pinned = vec![false; n];
        for p in &self.points {
            check(p.vertex)?;
            if std::mem::replace(&mut pinned[p.vertex], true) {
                return Err(Error::Validation(format!("vertex {} has two point constraints", p.vertex)));
            }
        }
        let mut fluxed = vec![false; n];
        for c in &self.fluxes {
            check(c.vertex)?;
            if pinned[c.vertex] {
                return Err(Error::Validation(format!(
                    "vertex {} is both point- and flux-constrained",
                    c.vertex
                )));
            }
            if std::mem::replace(&mut fluxed[c.vertex], true) {
                return Err(Error::Validation(format!("vertex {} has two flux constraints", c.vertex)));
            }
        }
        for c in &self.scales {
            check(c.vertex)?;
        }
        if !self.scales.is_empty() {
            match &self.reference {
                Some(r) if r.log_lengths.len() == surface.edge_count() => r.validate(surface)?,
                Some(r) => {
                    return Err(Error::DimensionMismatch {
                        expected: surface.edge_count(),
                        got: r.log_lengths.len(),
                    })
                }
                None => return Err(Error::Validation("scale constraints need a reference metric".into())),
            }
        }
        for &(a, b) in &self.identifications {
            check(a)?;
            check(b)?;
            if a == b {
                return Err(Error::Validation(format!("vertex {a} identified with itself")));
            }
        }
        if let Some(c) = &self.conformal {
            crate::conformal::check_len(surface.edge_count(), c.class.values.len())?;
            crate::conformal::check_len(surface.boundary_component_count(), c.boundary_active.len())?;
            if c.class.values.iter().any(|x| !x.is_finite()) {
                return Err(Error::Validation("conformal class has non-finite entries".into()));
            }
        }
        if self.volume.is_some() && !surface.is_closed() {
            return Err(Error::SurfaceHasBoundary);
        }
        if !self.fluxes.is_empty() {
            balancing_check(self, surface)?;
        }
        Ok(())
    }
}

/// Outcome of the flux pre-check.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    pub sum: Vector3<f64>,
    pub tolerance: f64,
    /// The check needs the solution (higher genus, boundary, or unknown
    /// point-constraint fluxes) and was not enforced.
    pub deferred: bool,
}

/// Prescribed fluxes on a closed genus-0 surface without point constraints
/// must sum to zero.
pub fn balancing_check(constraints: &ConstraintSet, surface: &SimplicialSurface) -> Result<BalanceReport> {
    let sum: Vector3<f64> = constraints.fluxes.iter().map(|c| c.flux).sum();
    let tolerance = 1e-10 * constraints.fluxes.iter().map(|c| c.flux.norm()).sum::<f64>();
    let decidable = surface.is_closed()
        && surface.genus() == 0
        && surface.connected_components() == 1
        && constraints.points.is_empty()
        && constraints.identifications.is_empty();
    if decidable && sum.norm() > tolerance {
        return Err(Error::UnbalancedFlux {
            residual: sum.norm(),
            tolerance,
        });
    }
    Ok(BalanceReport {
        sum,
        tolerance,
        deferred: !decidable,
    })
}

/// Edge scalars `q` with the vertex-sum properties of a quadratic
/// differential.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticDifferential(pub Vec<f64>);

impl QuadraticDifferential {
    /// `Σ_j q_ij` per vertex.
    pub fn vertex_sums(&self, surface: &SimplicialSurface) -> Vec<f64> {
        let mut out = vec![0.0; surface.vertex_count()];
        for (e, &[a, b]) in surface.edges().iter().enumerate() {
            out[a] += self.0[e];
            out[b] += self.0[e];
        }
        out
    }

    /// `Σ_{i∈V_β} Σ_j q_ij` per boundary component.
    pub fn boundary_sums(&self, surface: &SimplicialSurface) -> Vec<f64> {
        let sums = self.vertex_sums(surface);
        let mut out = vec![0.0; surface.boundary_component_count()];
        for (v, s) in sums.iter().enumerate() {
            if let Some(c) = surface.boundary_component(v) {
                out[c] += s;
            }
        }
        out
    }
}

/// `q = Cᵀλ` over the active rows of the extended cross-ratio operator.
pub fn multiplier_to_qd(op: &CrossRatioOperator, lambda_conf: &[f64]) -> Result<QuadraticDifferential> {
    crate::conformal::check_len(op.matrix.nrows(), lambda_conf.len())?;
    Ok(QuadraticDifferential(op.apply_transpose(lambda_conf)))
}

/// Stationarity per vertex and feasibility per constraint row.
pub fn kkt_residual(
    surface: &SimplicialSurface,
    system: &ConstraintSystem,
    f: &[Point],
    multipliers: &[f64],
) -> Result<(DualForm2<Vector3<f64>>, Vec<f64>)> {
    crate::conformal::check_len(surface.vertex_count(), f.len())?;
    crate::conformal::check_len(system.multiplier_len(), multipliers.len())?;
    Ok((system.stationarity(surface, f, multipliers)?, system.values(surface, f)?))
}

/// The symmetric matrix `[K Jᵀ; J 0]` acting on `(δf, −δλ)`.
pub fn assemble_jacobian(
    surface: &SimplicialSurface,
    system: &ConstraintSystem,
    f: &[Point],
    multipliers: &[f64],
) -> Result<SparseSystem> {
    let np = system.primal_len();
    let mut triplets = system.primal_hessian(surface, f, multipliers)?;
    let jac = system.jacobian(surface, f)?;
    for (r, row) in jac.rows.iter().enumerate() {
        for &(c, v) in row.entries() {
            triplets.push((np + r, c, v));
            triplets.push((c, np + r, v));
        }
    }
    if triplets.iter().any(|t| !t.2.is_finite()) {
        return Err(Error::SingularConfiguration("non-finite Jacobian entry".into()));
    }
    Ok(SparseSystem {
        dim: np + system.multiplier_len(),
        triplets,
    })
}
