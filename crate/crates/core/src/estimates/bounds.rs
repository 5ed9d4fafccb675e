use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::GridField;
use crate::pde::Problem;
use crate::scalar::Real;
use crate::symfunc::{sigma_k_root, ConeSpec};

/// Distance kept between the bounds and the extreme interior values, so the
/// strict inequalities stay checkable in floating point.
pub const C0_MARGIN: f64 = 1e-6;

/// How a solution relates to its bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Increasing right-hand side: `lower < u < upper` everywhere.
    Enclosing,
    /// Decreasing right-hand side: `sup u > lower` and `inf u < upper`.
    Straddling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C0Bounds<T> {
    pub lower: T,
    pub upper: T,
    pub kind: BoundKind,
}

impl<T: Real> C0Bounds<T> {
    pub fn new(lower: T, upper: T, kind: BoundKind) -> Result<Self> {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::domain(format!(
                "bounds need finite lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(C0Bounds { lower, upper, kind })
    }

    /// Bounds valid along the whole homotopy path, which starts at `u = 0`:
    /// the interval widened to contain `0` with the same margin.
    pub fn path_bounds(&self) -> Self {
        let m = T::lit(C0_MARGIN);
        C0Bounds {
            lower: self.lower.min(-m),
            upper: self.upper.max(m),
            kind: self.kind,
        }
    }
}

/// Tightest constants with `psi(x, lower) < sigma_k^{1/k}(S) < psi(x, upper)`
/// (or the reverse when `a < 0`), widened by [`C0_MARGIN`].
pub fn c0_bounds<T: Real>(p: &Problem<T>) -> Result<C0Bounds<T>> {
    let cone = ConeSpec::positive(p.k);
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..p.grid.len() {
        let root = sigma_k_root(p.s.at(i), &cone)
            .map_err(|_| Error::domain(format!("S leaves Gamma_{}^+ at point {i}", p.k)))?;
        let v = (root / p.psi.f.values()[i]).ln() / p.psi.a;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let m = T::lit(C0_MARGIN);
    let kind = if p.psi.a > T::zero() {
        BoundKind::Enclosing
    } else {
        BoundKind::Straddling
    };
    C0Bounds::new(lo - m, hi + m, kind)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C0Report<T> {
    pub pass: bool,
    pub kind: BoundKind,
    pub lower: T,
    pub upper: T,
    pub u_min: T,
    pub u_max: T,
    /// `u_min - lower` (enclosing) or `u_max - lower` (straddling).
    pub lower_margin: T,
    /// `upper - u_max` (enclosing) or `upper - u_min` (straddling).
    pub upper_margin: T,
    /// Grid index of the worst violation, if any.
    pub violation: Option<usize>,
}

pub fn verify_c0<T: Real>(u: &GridField<T>, b: &C0Bounds<T>) -> C0Report<T> {
    let (u_min, u_max) = (u.min(), u.max());
    let (lower_margin, upper_margin) = match b.kind {
        BoundKind::Enclosing => (u_min - b.lower, b.upper - u_max),
        BoundKind::Straddling => (u_max - b.lower, b.upper - u_min),
    };
    let pass = lower_margin > T::zero() && upper_margin > T::zero();
    let violation = if pass {
        None
    } else {
        let low_bad = !(lower_margin > T::zero());
        let high_bad = !(upper_margin > T::zero());
        Some(
            match (
                b.kind,
                low_bad && (!high_bad || lower_margin <= upper_margin),
            ) {
                (BoundKind::Enclosing, true) => u.argmin(),
                (BoundKind::Enclosing, false) => u.argmax(),
                (BoundKind::Straddling, true) => u.argmax(),
                (BoundKind::Straddling, false) => u.argmin(),
            },
        )
    };
    C0Report {
        pass,
        kind: b.kind,
        lower: b.lower,
        upper: b.upper,
        u_min,
        u_max,
        lower_margin,
        upper_margin,
        violation,
    }
}
