use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerances and step controls shared by every solver in this module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions<T> {
    /// Sup-norm residual at which Newton stops.
    pub residual_tol: T,
    pub max_newton_iters: usize,
    /// Backtracking factor applied to a rejected Newton step.
    pub line_search_shrink: T,
    /// Smallest step fraction tried before giving up on a Newton direction.
    pub min_step: T,
    pub dt_initial: T,
    pub dt_min: T,
    /// Largest homotopy step the controller grows to.
    pub dt_max: T,
    /// Relative (2-norm) residual target of each linear solve.
    pub linear_tol: T,
    /// Linear iteration cap; `None` means `10 * sqrt(unknowns)`.
    pub linear_max_iters: Option<usize>,
    /// Krylov subspace size of the restarted GMRES fallback.
    pub gmres_restart: usize,
    /// Sup-norm gap between consecutive fixed-point iterates at which the
    /// outer iteration stops.
    pub fixed_point_tol: T,
    pub max_fixed_point_iters: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        SolverOptions {
            residual_tol: T::lit(1e-8),
            max_newton_iters: 50,
            line_search_shrink: T::lit(0.5),
            min_step: T::lit(1e-10),
            dt_initial: T::lit(1.0 / 16.0),
            dt_min: T::lit(1.0 / 1024.0),
            dt_max: T::lit(0.25),
            linear_tol: T::lit(1e-10),
            linear_max_iters: None,
            gmres_restart: 60,
            fixed_point_tol: T::lit(1e-8),
            max_fixed_point_iters: 500,
        }
    }
}

impl<T: Real> SolverOptions<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("residual_tol", self.residual_tol),
            ("line_search_shrink", self.line_search_shrink),
            ("min_step", self.min_step),
            ("dt_initial", self.dt_initial),
            ("dt_min", self.dt_min),
            ("dt_max", self.dt_max),
            ("linear_tol", self.linear_tol),
            ("fixed_point_tol", self.fixed_point_tol),
        ];
        for (name, v) in positive {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::domain(format!(
                    "solver option {name} must be positive"
                )));
            }
        }
        if self.line_search_shrink >= T::one() {
            return Err(Error::domain("line_search_shrink must be below 1"));
        }
        if !(self.dt_min <= self.dt_initial
            && self.dt_initial <= self.dt_max
            && self.dt_max <= T::one())
        {
            return Err(Error::domain("need dt_min <= dt_initial <= dt_max <= 1"));
        }
        if self.max_newton_iters == 0 || self.max_fixed_point_iters == 0 {
            return Err(Error::domain("iteration caps must be positive"));
        }
        if self.linear_max_iters == Some(0) || self.gmres_restart == 0 {
            return Err(Error::domain("linear iteration caps must be positive"));
        }
        Ok(())
    }

    /// Linear iteration cap for a system with `unknowns` unknowns.
    pub fn linear_cap(&self, unknowns: usize) -> usize {
        self.linear_max_iters
            .unwrap_or_else(|| ((10.0 * (unknowns as f64).sqrt()).ceil() as usize).max(20))
    }
}
