//! Homotopy continuation with damped Newton for the main equation, and the
//! normalized and fixed-point solvers for the determinant equation.

mod continuation;
pub mod krylov;
mod newton;
mod normalized;
mod options;
mod trace;

pub use continuation::{
    continuation_resume, continuation_solve, continuation_solve_traced, ContinuationState,
};
pub use newton::{newton_solve, newton_solve_report, NewtonReport};
pub use normalized::{
    fixed_point_solve, fixed_point_solve_traced, solve_normalized, solve_normalized_report,
    FixedPointRecord, NormalizedProblem,
};
pub use options::SolverOptions;
pub use trace::TraceRecord;
