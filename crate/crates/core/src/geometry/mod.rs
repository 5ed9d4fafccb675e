//! Flat periodic grids, fields on them, second-order finite-difference
//! operators and the closed-form model geometries.

mod field;
mod grid;
pub mod io;
mod model;
pub(crate) mod ops;

pub use field::{GridField, TensorField};
pub use grid::TorusGrid;
pub use model::{model_schouten, ModelGeometry, ModelKind, SchoutenSummary};
pub use ops::{augmented_hessian, conformal_hessian, gradient, hessian};
