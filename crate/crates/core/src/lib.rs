//! Numerical toolkit for the fully nonlinear equation
//!
//! ```text
//! sigma_k^{1/k}( Hess u + du (x) du - |grad u|^2/2 g + S ) = psi(x, u)
//! ```
//!
//! on a flat periodic torus, together with the algebra of elementary
//! symmetric functions and Garding cones it rests on, and audits of the
//! a-priori bounds its solutions must obey.
//!
//! Everything numerical is generic over [`Real`] (implemented for `f32` and
//! `f64`); the `*64` aliases at the crate root fix the scalar to `f64`.

// NaN must fail these guards, so `!(x > 0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod estimates;
pub mod geometry;
pub mod identities;

pub mod pde;
pub mod scalar;
pub mod solver;
pub mod symfunc;

pub use error::{Error, Result};
pub use scalar::Real;

pub use estimates::{C0Bounds, PhiConstants, PhiMode};
pub use geometry::{GridField, ModelGeometry, TensorField, TorusGrid};
pub use pde::{Problem, PsiSpec};
pub use solver::{ContinuationState, NormalizedProblem, SolverOptions};
pub use symfunc::{ConeSpec, EigenList, Sign, SymMat};

pub type SymMat64 = SymMat<f64>;
pub type SymMat32 = SymMat<f32>;
pub type EigenList64 = EigenList<f64>;
pub type ConeSpec64 = ConeSpec<f64>;
pub type TorusGrid64 = TorusGrid<f64>;
pub type GridField64 = GridField<f64>;
pub type GridField32 = GridField<f32>;
pub type TensorField64 = TensorField<f64>;
pub type Problem64 = Problem<f64>;
pub type Problem32 = Problem<f32>;
pub type PsiSpec64 = PsiSpec<f64>;
pub type SolverOptions64 = SolverOptions<f64>;
pub type ContinuationState64 = ContinuationState<f64>;
pub type NormalizedProblem64 = NormalizedProblem<f64>;
pub type C0Bounds64 = C0Bounds<f64>;
pub type PhiConstants64 = PhiConstants<f64>;
