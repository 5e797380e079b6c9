//! Stacked equality constraints `c(f) = 0`, their Jacobian and the KKT
//! residual of the Lagrangian `𝒪(f) − Σ⟨ν_v, f_v⟩ − ⟨λ, c(f)⟩`.

use nalgebra::Vector3;

use super::geometry::{self, Triplets};
use super::{ConstraintSet, Objective};
use crate::conformal::{scale_rows, CrossRatioOperator, DiscreteMetric};
use crate::dec::{DualForm2, SimplicialSurface};
use crate::error::{Error, Result};
use crate::sparse::{SparseRow, SparseRows};
use crate::willmore;
use crate::Point;

/// Constraint rows in a fixed order: rows linear in `log ℓ` (conformal, then
/// scale), point rows, identification rows, area, volume.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub objective: Objective,
    /// Rows over edges acting on `log ℓ`.
    pub log_rows: SparseRows,
    pub log_targets: Vec<f64>,
    /// Number of leading rows of `log_rows` that are conformal rows.
    pub conformal_rows: usize,
    /// Edge of each conformal row.
    pub conformal_row_edges: Vec<usize>,
    /// Vertex of each scale row.
    pub scale_row_vertices: Vec<usize>,
    pub points: Vec<(usize, Point)>,
    pub identifications: Vec<(usize, usize)>,
    pub area: Option<f64>,
    pub volume: Option<f64>,
    /// Prescribed flux per vertex.
    pub fluxes: Vec<(usize, Vector3<f64>)>,
    vertex_count: usize,
}

impl ConstraintSystem {
    pub fn new(surface: &SimplicialSurface, constraints: &ConstraintSet) -> Result<Self> {
        constraints.validate(surface)?;
        let mut log_rows = SparseRows::new(surface.edge_count());
        let mut log_targets = Vec::new();
        let mut conformal_row_edges = Vec::new();
        if let Some(target) = &constraints.conformal {
            let op = CrossRatioOperator::new(surface, &target.boundary_active)?;
            log_targets.extend(op.targets(&target.class));
            conformal_row_edges = op.row_edges.clone();
            log_rows.stack(&op.matrix);
        }
        let conformal_rows = log_rows.nrows();
        let mut scale_row_vertices = Vec::new();
        if !constraints.scales.is_empty() {
            let reference: &DiscreteMetric = constraints
                .reference
                .as_ref()
                .ok_or_else(|| Error::Validation("scale constraints need a reference metric".into()))?;
            for c in &constraints.scales {
                let rows = scale_rows(surface, &[c.vertex], c.mode)?;
                for (row, &v) in rows.matrix.rows.iter().zip(&rows.row_vertices) {
                    if scale_row_vertices.contains(&v) {
                        return Err(Error::DuplicateRow(v));
                    }
                    log_targets.push(c.value + row.dot(&reference.log_lengths));
                    log_rows.push(row.clone());
                    scale_row_vertices.push(v);
                }
            }
        }
        Ok(Self {
            objective: constraints.objective,
            log_rows,
            log_targets,
            conformal_rows,
            conformal_row_edges,
            scale_row_vertices,
            points: constraints.points.iter().map(|p| (p.vertex, p.target)).collect(),
            identifications: constraints.identifications.clone(),
            area: constraints.area,
            volume: constraints.volume,
            fluxes: constraints.fluxes.iter().map(|c| (c.vertex, c.flux)).collect(),
            vertex_count: surface.vertex_count(),
        })
    }

    pub fn primal_len(&self) -> usize {
        3 * self.vertex_count
    }

    pub fn multiplier_len(&self) -> usize {
        self.log_rows.nrows()
            + 3 * self.points.len()
            + 3 * self.identifications.len()
            + self.area.is_some() as usize
            + self.volume.is_some() as usize
    }

    fn point_offset(&self) -> usize {
        self.log_rows.nrows()
    }

    fn ident_offset(&self) -> usize {
        self.point_offset() + 3 * self.points.len()
    }

    fn area_offset(&self) -> usize {
        self.ident_offset() + 3 * self.identifications.len()
    }

    fn volume_offset(&self) -> usize {
        self.area_offset() + self.area.is_some() as usize
    }

    /// Multipliers of the conformal rows.
    pub fn conformal_multipliers<'a>(&self, lambda: &'a [f64]) -> &'a [f64] {
        &lambda[..self.conformal_rows]
    }

    /// Multipliers of the rows over `log ℓ`.
    pub fn log_multipliers<'a>(&self, lambda: &'a [f64]) -> &'a [f64] {
        &lambda[..self.log_rows.nrows()]
    }

    /// Recovered flux `ν` at each point constraint.
    pub fn point_fluxes(&self, lambda: &[f64]) -> Vec<Vector3<f64>> {
        let o = self.point_offset();
        (0..self.points.len())
            .map(|p| Vector3::new(lambda[o + 3 * p], lambda[o + 3 * p + 1], lambda[o + 3 * p + 2]))
            .collect()
    }

    pub fn area_multiplier(&self, lambda: &[f64]) -> Option<f64> {
        self.area.map(|_| lambda[self.area_offset()])
    }

    pub fn volume_multiplier(&self, lambda: &[f64]) -> Option<f64> {
        self.volume.map(|_| lambda[self.volume_offset()])
    }

    /// `c(f)`.
    pub fn values(&self, surface: &SimplicialSurface, f: &[Point]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.multiplier_len());
        if self.log_rows.nrows() > 0 {
            let log_l = crate::conformal::induced_metric(surface, f)?;
            let lc = self.log_rows.apply(&log_l.log_lengths);
            out.extend(lc.iter().zip(&self.log_targets).map(|(a, b)| a - b));
        }
        for &(v, p) in &self.points {
            out.extend((f[v] - p).iter());
        }
        for &(a, b) in &self.identifications {
            out.extend((f[a] - f[b]).iter());
        }
        if let Some(a) = self.area {
            out.push(geometry::area(surface, f).value - a);
        }
        if let Some(v) = self.volume {
            out.push(geometry::volume(surface, f)?.value - v);
        }
        Ok(out)
    }

    /// `∂c/∂f` as rows over flattened positions.
    pub fn jacobian(&self, surface: &SimplicialSurface, f: &[Point]) -> Result<SparseRows> {
        let mut jac = SparseRows::new(self.primal_len());
        for row in &self.log_rows.rows {
            jac.push(geometry::pull_back_row(surface, f, row));
        }
        for &(v, _) in &self.points {
            for c in 0..3 {
                jac.push(SparseRow(vec![(3 * v + c, 1.0)]));
            }
        }
        for &(a, b) in &self.identifications {
            for c in 0..3 {
                jac.push(SparseRow::from_entries(vec![(3 * a + c, 1.0), (3 * b + c, -1.0)]));
            }
        }
        if self.area.is_some() {
            jac.push(flatten_gradient(&geometry::area(surface, f).gradient));
        }
        if self.volume.is_some() {
            jac.push(flatten_gradient(&geometry::volume(surface, f)?.gradient));
        }
        Ok(jac)
    }

    /// Edge function `q = Rᵀλ` over all rows linear in `log ℓ`.
    pub fn edge_multiplier(&self, lambda: &[f64]) -> Vec<f64> {
        self.log_rows.apply_transpose(self.log_multipliers(lambda))
    }

    /// Objective gradient.
    pub fn objective_gradient(&self, surface: &SimplicialSurface, f: &[Point]) -> Result<DualForm2<Vector3<f64>>> {
        match self.objective {
            Objective::Willmore => willmore::willmore_gradient(surface, f),
            Objective::Area => Ok(geometry::area(surface, f).gradient),
        }
    }

    /// `grad 𝒪 − Jᵀλ − ν_fixed`, per vertex.
    pub fn stationarity(
        &self,
        surface: &SimplicialSurface,
        f: &[Point],
        lambda: &[f64],
    ) -> Result<DualForm2<Vector3<f64>>> {
        let mut s = self.objective_gradient(surface, f)?;
        let jt = self.jacobian(surface, f)?.apply_transpose(lambda);
        for v in 0..self.vertex_count {
            s[v] -= Vector3::new(jt[3 * v], jt[3 * v + 1], jt[3 * v + 2]);
        }
        for &(v, nu) in &self.fluxes {
            s[v] -= nu;
        }
        Ok(s)
    }

    /// Primal block `∇²𝒪 − Σ_r λ_r ∇²c_r`.
    pub fn primal_hessian(&self, surface: &SimplicialSurface, f: &[Point], lambda: &[f64]) -> Result<Triplets> {
        let mut out = match self.objective {
            Objective::Willmore => willmore::willmore_hessian(surface, f, 1.0)?,
            Objective::Area => {
                let mut t = Vec::new();
                geometry::area_hessian(surface, f, 1.0, &mut t);
                t
            }
        };
        if self.log_rows.nrows() > 0 {
            geometry::log_length_hessian(surface, f, &self.edge_multiplier(lambda), -1.0, &mut out);
        }
        if let Some(la) = self.area_multiplier(lambda) {
            geometry::area_hessian(surface, f, -la, &mut out);
        }
        if let Some(lv) = self.volume_multiplier(lambda) {
            geometry::volume_hessian(surface, f, -lv, &mut out);
        }
        Ok(out)
    }
}

fn flatten_gradient(g: &DualForm2<Vector3<f64>>) -> SparseRow {
    SparseRow::from_entries(
        g.values()
            .iter()
            .enumerate()
            .flat_map(|(v, x)| (0..3).map(move |c| (3 * v + c, x[c])))
            .collect(),
    )
}
