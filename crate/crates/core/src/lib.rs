//! Conformal surface splines: discrete constrained Willmore surfaces.
//!
//! Triangle-mesh immersions are optimized for the Möbius-invariant discrete
//! Willmore energy (or area) inside a fixed discrete conformal class, with
//! free boundary conditions, point, scale, flux, area and volume
//! constraints. The [`diagnostics`] module certifies the conservation laws
//! and balancing conditions of the resulting surfaces.

pub mod autodiff;
pub mod cli;
pub mod conformal;
pub mod dec;
pub mod diagnostics;
mod error;
pub mod io;
pub mod shapes;
pub mod solver;
pub mod sparse;
pub mod willmore;

#[cfg(test)]
mod testing;

pub use dec::{Point, SimplicialSurface};
pub use error::{Error, Result};
