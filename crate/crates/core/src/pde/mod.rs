//! The nonlinear operator, its homotopy blend and linearization, and
//! admissibility tests for iterates.

pub mod catalog;
mod manufactured;
mod operator;
mod problem;
mod segment;

pub use manufactured::{manufacture, Manufactured};
pub use operator::{
    check_admissible, linearize, linearize_apply, negative_residual, residual, Linearization,
};
pub use problem::{Problem, PsiSpec};
pub use segment::{admissible_segment_test, SegmentFailure, SegmentTest};
