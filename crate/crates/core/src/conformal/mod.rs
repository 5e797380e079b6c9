//! Discrete metrics and conformal equivalence.
//!
//! Metrics are stored as log edge lengths. Conformal classes are the image
//! of the extended cross-ratio operator: log length cross ratios on
//! interior edges and log length half cross ratios on boundary edges.

mod qc;

pub use qc::{quasi_conformal_error, Histogram, QcReport, HISTOGRAM_BINS};

use nalgebra::DMatrix;

use crate::dec::{average, PrimalForm0, SimplicialSurface};
use crate::error::{Error, Result};
use crate::sparse::{SparseRow, SparseRows};
use crate::Point;

/// Relative slack of the strict triangle inequality.
pub const TRIANGLE_SLACK: f64 = 1e-12;

/// Log edge lengths, one per edge of a surface.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMetric {
    pub log_lengths: Vec<f64>,
}

impl DiscreteMetric {
    pub fn new(log_lengths: Vec<f64>) -> Self {
        Self { log_lengths }
    }

    pub fn length(&self, e: usize) -> f64 {
        self.log_lengths[e].exp()
    }

    /// Checks the strict triangle inequality on every face.
    pub fn validate(&self, surface: &SimplicialSurface) -> Result<()> {
        if self.log_lengths.len() != surface.edge_count() {
            return Err(Error::DimensionMismatch {
                expected: surface.edge_count(),
                got: self.log_lengths.len(),
            });
        }
        for f in 0..surface.face_count() {
            let l = surface.face_edges(f).map(|e| self.length(e));
            let perimeter = l[0] + l[1] + l[2];
            let slack = TRIANGLE_SLACK * perimeter;
            if !perimeter.is_finite()
                || (0..3).any(|a| l[a] + slack >= perimeter - l[a])
            {
                return Err(Error::TriangleInequalityViolated(f));
            }
        }
        Ok(())
    }
}

/// `λ_ij = log |f_j − f_i|`.
pub fn induced_metric(surface: &SimplicialSurface, f: &[Point]) -> Result<DiscreteMetric> {
    check_len(surface.vertex_count(), f.len())?;
    surface
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &[a, b])| {
            let len = (f[b] - f[a]).norm();
            if len > 0.0 {
                Ok(len.ln())
            } else {
                Err(Error::ZeroLengthEdge(e))
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(DiscreteMetric::new)
}

/// Where a conformal class came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Computed from a valid metric, hence feasible.
    FromMetric,
    /// Read from a file; may not be realizable.
    UserSupplied,
}

/// Target value per edge: log cross ratio on interior edges, log half cross
/// ratio on boundary edges.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalClass {
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

/// Row of the extended cross-ratio operator for edge `e`.
pub fn cross_ratio_row(surface: &SimplicialSurface, e: usize) -> SparseRow {
    let edge = |a: usize, b: usize| surface.edge_between(a, b).expect("stencil edge").0;
    if let Some(s) = surface.interior_stencil(e) {
        SparseRow::from_entries(vec![
            (edge(s.i, s.l), 1.0),
            (edge(s.l, s.j), -1.0),
            (edge(s.j, s.k), 1.0),
            (edge(s.k, s.i), -1.0),
        ])
    } else {
        let s = surface.boundary_stencil(e).expect("edge has a face");
        SparseRow::from_entries(vec![(edge(s.j, s.k), 1.0), (edge(s.k, s.i), -1.0)])
    }
}

/// The extended cross-ratio operator restricted to its active rows.
#[derive(Clone, Debug)]
pub struct CrossRatioOperator {
    pub matrix: SparseRows,
    /// Edge index of each row.
    pub row_edges: Vec<usize>,
}

impl CrossRatioOperator {
    /// All interior rows plus the boundary rows of every component whose
    /// entry in `boundary_active` is set.
    pub fn new(surface: &SimplicialSurface, boundary_active: &[bool]) -> Result<Self> {
        check_len(surface.boundary_component_count(), boundary_active.len())?;
        let mut matrix = SparseRows::new(surface.edge_count());
        let mut row_edges = Vec::new();
        for e in 0..surface.edge_count() {
            if surface.is_boundary_edge(e) {
                let v = surface.edges()[e][0];
                let component = surface.boundary_component(v).expect("boundary vertex");
                if !boundary_active[component] {
                    continue;
                }
            }
            matrix.push(cross_ratio_row(surface, e));
            row_edges.push(e);
        }
        Ok(Self { matrix, row_edges })
    }

    /// Every row, interior and boundary.
    pub fn full(surface: &SimplicialSurface) -> Self {
        Self::new(surface, &vec![true; surface.boundary_component_count()])
            .expect("matching component count")
    }

    pub fn apply(&self, lambda: &[f64]) -> Vec<f64> {
        self.matrix.apply(lambda)
    }

    pub fn apply_transpose(&self, mu: &[f64]) -> Vec<f64> {
        self.matrix.apply_transpose(mu)
    }

    /// Entries of `class` on the active rows.
    pub fn targets(&self, class: &ConformalClass) -> Vec<f64> {
        self.row_edges.iter().map(|&e| class.values[e]).collect()
    }
}

/// `ξ = Cλ` on every edge.
pub fn extended_cross_ratio(surface: &SimplicialSurface, lambda: &DiscreteMetric) -> ConformalClass {
    ConformalClass {
        values: (0..surface.edge_count())
            .map(|e| cross_ratio_row(surface, e).dot(&lambda.log_lengths))
            .collect(),
        provenance: Provenance::FromMetric,
    }
}

/// `λ' = λ + Au`, validated.
pub fn conformal_rescale(
    surface: &SimplicialSurface,
    lambda: &DiscreteMetric,
    u: &PrimalForm0<f64>,
) -> Result<DiscreteMetric> {
    check_len(surface.vertex_count(), u.len())?;
    let au = average(surface, u);
    let out = DiscreteMetric::new(
        lambda
            .log_lengths
            .iter()
            .zip(au.values())
            .map(|(l, a)| l + a)
            .collect(),
    );
    out.validate(surface)?;
    Ok(out)
}

/// `A·B` as a dense `|E| × (|V₀| + b)` matrix: one column per interior
/// vertex and one per boundary component, each the averaged indicator of
/// that vertex or component.
pub fn locally_constant_scales(surface: &SimplicialSurface) -> DMatrix<f64> {
    let interior: Vec<usize> = surface.interior_vertices().collect();
    let cols = interior.len() + surface.boundary_component_count();
    let mut column_of = vec![0; surface.vertex_count()];
    for (c, &v) in interior.iter().enumerate() {
        column_of[v] = c;
    }
    for v in 0..surface.vertex_count() {
        if let Some(b) = surface.boundary_component(v) {
            column_of[v] = interior.len() + b;
        }
    }
    let mut m = DMatrix::zeros(surface.edge_count(), cols);
    for (e, &[a, b]) in surface.edges().iter().enumerate() {
        m[(e, column_of[a])] += 0.5;
        m[(e, column_of[b])] += 0.5;
    }
    m
}

/// Number of singular values of `m` at most `tolerance · σ_max`, plus the
/// column deficit.
pub fn numerical_nullity(m: &DMatrix<f64>, tolerance: f64) -> usize {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return cols;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let rank = sv.iter().filter(|&&x| x > tolerance * top).count();
    cols - rank
}

/// Kernel dimension of the full extended cross-ratio operator.
pub fn kernel_dimension(surface: &SimplicialSurface, tolerance: f64) -> usize {
    numerical_nullity(&CrossRatioOperator::full(surface).matrix.to_dense(), tolerance)
}

/// Edges of face `f` ordered as `(ij, jk, ki)` relative to corner `i`.
fn corner_edges(surface: &SimplicialSurface, f: usize, i: usize) -> [usize; 3] {
    let t = surface.faces()[f];
    let p = t.iter().position(|&v| v == i).expect("corner of face");
    let (j, k) = (t[(p + 1) % 3], t[(p + 2) % 3]);
    let edge = |a: usize, b: usize| surface.edge_between(a, b).expect("face edge").0;
    [edge(i, j), edge(j, k), edge(k, i)]
}

/// Scale row of vertex `i`: the facewise `(1, −1, 1)` pattern averaged over
/// incident faces.
pub fn scale_row(surface: &SimplicialSurface, i: usize) -> SparseRow {
    let faces = surface.vertex_faces(i);
    let w = 1.0 / faces.len() as f64;
    let mut entries = Vec::with_capacity(3 * faces.len());
    for &f in faces {
        let [ij, jk, ki] = corner_edges(surface, f, i);
        entries.extend([(ij, w), (jk, -w), (ki, w)]);
    }
    SparseRow::from_entries(entries)
}

/// Averaged per-face scale factors `u` with `λ ≈ λ̃ + Au`.
pub fn scale_factors(
    surface: &SimplicialSurface,
    lambda: &DiscreteMetric,
    reference: &DiscreteMetric,
) -> PrimalForm0<f64> {
    let diff: Vec<f64> = lambda
        .log_lengths
        .iter()
        .zip(&reference.log_lengths)
        .map(|(a, b)| a - b)
        .collect();
    PrimalForm0(
        (0..surface.vertex_count())
            .map(|i| scale_row(surface, i).dot(&diff))
            .collect(),
    )
}

/// How a scale constraint selects its rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleMode {
    /// One row at the vertex itself.
    Vertex,
    /// One row at each neighbor, none at the vertex.
    Link,
}

/// Stacked scale rows `U`, with the vertex each row constrains.
#[derive(Clone, Debug)]
pub struct ScaleConstraintRows {
    pub matrix: SparseRows,
    pub row_vertices: Vec<usize>,
}

pub fn scale_rows(
    surface: &SimplicialSurface,
    vertices: &[usize],
    mode: ScaleMode,
) -> Result<ScaleConstraintRows> {
    let mut row_vertices = Vec::new();
    for &v in vertices {
        if v >= surface.vertex_count() {
            return Err(Error::IndexOutOfRange {
                index: v,
                count: surface.vertex_count(),
            });
        }
        match mode {
            ScaleMode::Vertex => row_vertices.push(v),
            ScaleMode::Link => row_vertices.extend(surface.neighbors(v)),
        }
    }
    let mut seen = vec![false; surface.vertex_count()];
    let mut matrix = SparseRows::new(surface.edge_count());
    for &v in &row_vertices {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::DuplicateRow(v));
        }
        matrix.push(scale_row(surface, v));
    }
    Ok(ScaleConstraintRows {
        matrix,
        row_vertices,
    })
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
