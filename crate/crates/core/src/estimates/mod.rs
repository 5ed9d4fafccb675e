//! Explicit a-priori bounds and the audits that check solver output
//! against them.

mod bounds;
mod diagnostics;
mod harnack;
mod phi;

pub use bounds::{c0_bounds, verify_c0, BoundKind, C0Bounds, C0Report, C0_MARGIN};
pub use diagnostics::{diagnostics, Diagnostics};
pub use harnack::{
    comparison_profile, harnack_gap, lambda_max, verify_harnack, verify_v_convexity,
    ConvexityReport, HarnackReport,
};
pub use phi::{phi_constants, PhiCheck, PhiConstants, PhiMode};
