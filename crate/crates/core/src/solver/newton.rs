use super::krylov;
use super::options::SolverOptions;
use crate::error::{Error, Result};
use crate::geometry::GridField;
use crate::pde::{linearize, residual, Linearization, Problem};
use crate::scalar::Real;

/// A discrete nonlinear system `R(u) = 0` together with its derivative.
pub(crate) trait NewtonSystem<T: Real> {
    /// Fails with [`Error::NotAdmissible`] outside the admissible set.
    fn residual(&self, u: &GridField<T>) -> Result<GridField<T>>;
    fn linearize(&self, u: &GridField<T>) -> Result<Linearization<T>>;
}

pub(crate) struct Homotopy<'a, T> {
    pub p: &'a Problem<T>,
    pub t: T,
}

impl<T: Real> NewtonSystem<T> for Homotopy<'_, T> {
    fn residual(&self, u: &GridField<T>) -> Result<GridField<T>> {
        residual(u, self.p, self.t)
    }

    fn linearize(&self, u: &GridField<T>) -> Result<Linearization<T>> {
        linearize(u, self.p, self.t)
    }
}

/// Outcome of a converged Newton solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport<T> {
    pub u: GridField<T>,
    pub iterations: usize,
    pub residual_sup: T,
    /// Total Krylov iterations over all Newton steps.
    pub linear_iterations: usize,
}

pub(crate) fn damped_newton<T: Real>(
    sys: &impl NewtonSystem<T>,
    u0: &GridField<T>,
    opts: &SolverOptions<T>,
) -> Result<NewtonReport<T>> {
    opts.validate()?;
    let mut u = u0.clone();
    let mut r = sys.residual(&u)?;
    let mut r_sup = r.sup_norm();
    let mut linear_iterations = 0;
    for iter in 0..opts.max_newton_iters {
        if r_sup <= opts.residual_tol {
            return Ok(NewtonReport {
                u,
                iterations: iter,
                residual_sup: r_sup,
                linear_iterations,
            });
        }
        let lin = sys.linearize(&u)?;
        let rhs: Vec<T> = r.values().iter().map(|&v| -v).collect();
        let out = krylov::solve(
            |x: &[T], y: &mut [T]| lin.apply(x, y),
            &lin.diagonal(),
            &rhs,
            opts.linear_tol,
            opts.gmres_restart,
            opts.linear_cap(u.len()),
        );
        linear_iterations += out.iterations;
        if !out.x.iter().all(|v| v.is_finite()) {
            return Err(Error::NoConvergence {
                iterations: iter,
                residual: r_sup.as_f64(),
            });
        }
        let step = GridField::from_vec_unchecked(u.grid().clone(), out.x);
        let mut lambda = T::one();
        let mut last_err = None;
        let accepted = loop {
            let trial = u.axpy(lambda, &step);
            match sys.residual(&trial) {
                Ok(rt) if rt.sup_norm() < r_sup => break Some((trial, rt)),
                Ok(_) => last_err = None,
                Err(e @ Error::NotAdmissible { .. }) => last_err = Some(e),
                Err(e) => return Err(e),
            }
            lambda = lambda * opts.line_search_shrink;
            if lambda < opts.min_step {
                break None;
            }
        };
        match accepted {
            Some((trial, rt)) => {
                u = trial;
                r_sup = rt.sup_norm();
                r = rt;
            }
            None => {
                return Err(last_err.unwrap_or(Error::NoConvergence {
                    iterations: iter + 1,
                    residual: r_sup.as_f64(),
                }))
            }
        }
    }
    if r_sup <= opts.residual_tol {
        return Ok(NewtonReport {
            u,
            iterations: opts.max_newton_iters,
            residual_sup: r_sup,
            linear_iterations,
        });
    }
    Err(Error::NoConvergence {
        iterations: opts.max_newton_iters,
        residual: r_sup.as_f64(),
    })
}

/// Damped Newton for the homotopy equation at level `t`, started from an
/// admissible `u0`.
pub fn newton_solve<T: Real>(
    p: &Problem<T>,
    t: T,
    u0: &GridField<T>,
    opts: &SolverOptions<T>,
) -> Result<GridField<T>> {
    newton_solve_report(p, t, u0, opts).map(|rep| rep.u)
}

/// [`newton_solve`] returning iteration counts and the final residual.
pub fn newton_solve_report<T: Real>(
    p: &Problem<T>,
    t: T,
    u0: &GridField<T>,
    opts: &SolverOptions<T>,
) -> Result<NewtonReport<T>> {
    if p.psi.a <= T::zero() {
        return Err(Error::domain(
            "direct Newton needs an increasing right-hand side (a > 0); use the normalized solvers",
        ));
    }
    damped_newton(&Homotopy { p, t }, u0, opts)
}
