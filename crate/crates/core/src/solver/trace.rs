use serde::Serialize;

use super::continuation::ContinuationState;
use super::normalized::FixedPointRecord;
use crate::error::Result;
use crate::estimates::diagnostics;
use crate::pde::Problem;
use crate::scalar::Real;

/// One line of a solver trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord<T> {
    pub t: T,
    pub dt: T,
    pub newton_iters: usize,
    pub residual_sup: T,
    pub u_min: T,
    pub u_max: T,
    pub sigma_km1_max: T,
    pub hess_eig_max: T,
}

impl<T: Real> TraceRecord<T> {
    pub fn from_state(state: &ContinuationState<T>, p: &Problem<T>) -> Result<Self> {
        let d = diagnostics(&state.u, p)?;
        Ok(TraceRecord {
            t: state.t,
            dt: state.dt,
            newton_iters: state.newton_iters_last,
            residual_sup: state.residual_sup,
            u_min: state.u.min(),
            u_max: state.u.max(),
            sigma_km1_max: d.sigma_km1_max,
            hess_eig_max: d.hess_eig_max,
        })
    }
}

impl<T: Real> From<&FixedPointRecord<T>> for TraceRecord<T> {
    /// Fixed-point iterations take no homotopy step, so `dt` is zero.
    fn from(r: &FixedPointRecord<T>) -> Self {
        TraceRecord {
            t: r.t,
            dt: T::zero(),
            newton_iters: r.newton_iters,
            residual_sup: r.residual_sup,
            u_min: r.u_min,
            u_max: r.u_max,
            sigma_km1_max: r.sigma_km1_max,
            hess_eig_max: r.hess_eig_max,
        }
    }
}
