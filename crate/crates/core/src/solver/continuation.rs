use serde::Serialize;

use super::newton::newton_solve_report;
use super::options::SolverOptions;
use crate::error::{Error, Result};
use crate::geometry::GridField;
use crate::pde::{check_admissible, Problem};
use crate::scalar::Real;

/// One accepted point of the homotopy path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuationState<T> {
    pub t: T,
    #[serde(skip)]
    pub u: GridField<T>,
    /// Step the controller will try next from this state.
    pub dt: T,
    pub newton_iters_last: usize,
    pub residual_sup: T,
    pub admissible: bool,
}

/// Follows the homotopy from `(t = 0, u = 0)` to `t = 1` and returns the
/// final field with every accepted state.
pub fn continuation_solve<T: Real>(
    p: &Problem<T>,
    opts: &SolverOptions<T>,
) -> Result<(GridField<T>, Vec<ContinuationState<T>>)> {
    let mut trace = Vec::new();
    let u = continuation_solve_traced(p, opts, &mut trace)?;
    Ok((u, trace))
}

/// [`continuation_solve`] writing states into `trace` as they are accepted,
/// so a partial path survives a failure.
pub fn continuation_solve_traced<T: Real>(
    p: &Problem<T>,
    opts: &SolverOptions<T>,
    trace: &mut Vec<ContinuationState<T>>,
) -> Result<GridField<T>> {
    opts.validate()?;
    if p.psi.a <= T::zero() {
        return Err(Error::domain("continuation needs psi exponent a > 0"));
    }
    let u0 = GridField::zeros(p.grid.clone());
    check_admissible(&u0, p, T::zero())?;
    let start = ContinuationState {
        t: T::zero(),
        u: u0,
        dt: opts.dt_initial,
        newton_iters_last: 0,
        residual_sup: T::zero(),
        admissible: true,
    };
    trace.push(start.clone());
    continuation_resume(p, &start, opts, trace)
}

/// Continues the path from a stored state, appending the states that follow
/// it. Resuming from any state of a finished trace reproduces its tail.
pub fn continuation_resume<T: Real>(
    p: &Problem<T>,
    from: &ContinuationState<T>,
    opts: &SolverOptions<T>,
    trace: &mut Vec<ContinuationState<T>>,
) -> Result<GridField<T>> {
    opts.validate()?;
    let two = T::lit(2.0);
    let mut t = from.t;
    let mut u = from.u.clone();
    let mut dt = from.dt;
    while t < T::one() {
        let t_next = (t + dt).min(T::one());
        match newton_solve_report(p, t_next, &u, opts) {
            Ok(rep) => {
                t = t_next;
                u = rep.u;
                if rep.iterations <= 3 {
                    dt = (dt * two).min(opts.dt_max);
                }
                trace.push(ContinuationState {
                    t,
                    u: u.clone(),
                    dt,
                    newton_iters_last: rep.iterations,
                    residual_sup: rep.residual_sup,
                    admissible: true,
                });
            }
            Err(Error::NotAdmissible { .. } | Error::NoConvergence { .. }) => {
                dt = dt / two;
                if dt < opts.dt_min {
                    return Err(Error::ContinuationStalled {
                        t_reached: t.as_f64(),
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(u)
}
