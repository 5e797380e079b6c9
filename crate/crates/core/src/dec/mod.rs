//! Mesh combinatorics, discrete exterior calculus and the quaternionic
//! circle/sphere kernel.

pub mod circles;
pub mod forms;
pub mod quaternion;
mod surface;

pub use circles::{circumcircle_tangent, edge_circle, EdgeCircle, DEGENERATE_SIN};
pub use forms::{
    average, average_adjoint, d_dual1, d_primal0, scale_dual1, wedge, DualForm1, DualForm2,
    EdgeForm0, EdgeForm2, FormValue, PrimalForm0, PrimalForm1,
};
pub use quaternion::{pure_inverse, Quaternion};
pub use surface::{BoundaryStencil, EdgeStencil, SimplicialSurface};

use nalgebra::Vector3;

/// Vertex positions of an immersion.
pub type Point = Vector3<f64>;

/// Builds a surface from oriented triangles; see [`SimplicialSurface::new`].
pub fn build_surface(faces: Vec<[usize; 3]>, vertex_count: usize) -> crate::Result<SimplicialSurface> {
    SimplicialSurface::new(vertex_count, faces)
}
