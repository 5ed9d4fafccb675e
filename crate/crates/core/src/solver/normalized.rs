use std::sync::Arc;

use super::newton::{damped_newton, NewtonReport, NewtonSystem};
use super::options::SolverOptions;
use crate::error::{Error, Result};
use crate::estimates::{diagnostics, harnack_gap};
use crate::geometry::ops::augmented_at;
use crate::geometry::{GridField, TensorField, TorusGrid};
use crate::pde::{Linearization, Problem};
use crate::scalar::Real;
use crate::symfunc::{cone_check, eigen_sym, newton_pass, sigma_k_root, ConeSpec, Sign, SymMat};

/// The determinant equation with its right-hand side coupled to the mean:
///
/// ```text
/// det^{1/n}( Hess u + du (x) du - |du|^2/2 I + S_tau ) = rhs^{t_power tau} e^{-mean_weight <u>}
/// ```
///
/// where `S_tau = (1 - tau) lambda_max(S) I + tau S` and `<u>` is the integral
/// of `u` over the torus (Riemann sum with the grid's cell volume).
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedProblem<T> {
    pub grid: Arc<TorusGrid<T>>,
    pub s: TensorField<T>,
    pub mean_weight: T,
    /// Exponent multiplier on `rhs`; `1` is the `n`-th root of a right-hand
    /// side `f^{n tau}` on the determinant.
    pub t_power: T,
    lambda_max: T,
}

impl<T: Real> NormalizedProblem<T> {
    pub fn new(s: TensorField<T>, mean_weight: T, t_power: T) -> Result<Self> {
        let grid = s.grid().clone();
        if !(mean_weight > T::zero()) || !t_power.is_finite() {
            return Err(Error::domain(
                "mean_weight must be positive and t_power finite",
            ));
        }
        let cone = ConeSpec::positive(grid.dim());
        for (i, m) in s.mats().iter().enumerate() {
            cone_check(m, &cone)
                .map_err(|_| Error::domain(format!("S is not positive definite at point {i}")))?;
        }
        let lambda_max = s
            .mats()
            .iter()
            .map(|m| eigen_sym(m).max())
            .fold(T::neg_infinity(), T::max);
        Ok(NormalizedProblem {
            grid,
            s,
            mean_weight,
            t_power,
            lambda_max,
        })
    }

    /// Largest eigenvalue of `S` over the grid.
    pub fn lambda_max(&self) -> T {
        self.lambda_max
    }

    /// `S_tau` at grid point `idx`.
    pub fn s_blend(&self, idx: usize, tau: T) -> SymMat<T> {
        let n = self.grid.dim();
        SymMat::scaled_identity(n, (T::one() - tau) * self.lambda_max) + *self.s.at(idx) * tau
    }

    /// `u` solving the equation at `tau = 0`: the constant with
    /// `e^{-mean_weight <u>} = lambda_max`.
    pub fn base_solution(&self) -> GridField<T> {
        let c = -self.lambda_max.ln() / (self.mean_weight * self.grid.volume());
        GridField::constant(self.grid.clone(), c)
    }

    /// Pointwise residual at level `tau`.
    pub fn residual(&self, u: &GridField<T>, tau: T, rhs: &GridField<T>) -> Result<GridField<T>> {
        NormalizedSystem::new(self, tau, rhs)?.residual(u)
    }
}

struct NormalizedSystem<'a, T> {
    np: &'a NormalizedProblem<T>,
    tau: T,
    rhs_pow: Vec<T>,
    cone: ConeSpec<T>,
}

impl<'a, T: Real> NormalizedSystem<'a, T> {
    fn new(np: &'a NormalizedProblem<T>, tau: T, rhs: &GridField<T>) -> Result<Self> {
        if !(tau >= T::zero() && tau <= T::one()) {
            return Err(Error::domain(format!("tau = {tau} outside [0, 1]")));
        }
        if **rhs.grid() != *np.grid {
            return Err(Error::Shape(
                "rhs and problem live on different grids".into(),
            ));
        }
        if !(rhs.min() > T::zero()) {
            return Err(Error::domain("normalized right-hand side must be positive"));
        }
        let e = np.t_power * tau;
        Ok(NormalizedSystem {
            np,
            tau,
            rhs_pow: rhs.values().iter().map(|&r| r.powf(e)).collect(),
            cone: ConeSpec::positive(np.grid.dim()),
        })
    }

    fn check(&self, u: &GridField<T>) -> Result<()> {
        if **u.grid() != *self.np.grid {
            return Err(Error::Shape(
                "field and problem live on different grids".into(),
            ));
        }
        Ok(())
    }

    fn matrix(&self, u: &GridField<T>, i: usize) -> SymMat<T> {
        let s = self.np.s_blend(i, self.tau);
        augmented_at(&self.np.grid, u.values(), &s, i, Sign::Positive)
    }
}

impl<T: Real> NewtonSystem<T> for NormalizedSystem<'_, T> {
    fn residual(&self, u: &GridField<T>) -> Result<GridField<T>> {
        self.check(u)?;
        let decay = (-self.np.mean_weight * u.integral()).exp();
        let vals = (0..u.len())
            .map(|i| {
                let m = self.matrix(u, i);
                let root = sigma_k_root(&m, &self.cone).map_err(|e| e.at_point(i))?;
                Ok(root - self.rhs_pow[i] * decay)
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(GridField::from_vec_unchecked(u.grid().clone(), vals))
    }

    fn linearize(&self, u: &GridField<T>) -> Result<Linearization<T>> {
        self.check(u)?;
        let n = self.np.grid.dim();
        let nn = T::from_usize_lossy(n);
        let decay = (-self.np.mean_weight * u.integral()).exp();
        let mut coeff = Vec::with_capacity(u.len());
        for i in 0..u.len() {
            let m = self.matrix(u, i);
            cone_check(&m, &self.cone).map_err(|e| e.at_point(i))?;
            let pass = newton_pass(&m, n);
            let w = pass.sigmas[n].powf(T::one() / nn - T::one()) / nn;
            coeff.push(pass.t_prev * w);
        }
        let weight = self
            .rhs_pow
            .iter()
            .map(|&r| self.np.mean_weight * r * decay)
            .collect();
        Ok(Linearization::assemble(
            self.np.grid.clone(),
            u.values(),
            coeff,
            Sign::Positive,
            vec![T::zero(); u.len()],
            Some(weight),
        ))
    }
}

/// Solves the normalized equation at level `t` (the `tau` of
/// [`NormalizedProblem`]). Tries Newton from `warm` first; otherwise, or if
/// that fails, follows `tau` from the constant base solution at `tau = 0`.
pub fn solve_normalized<T: Real>(
    np: &NormalizedProblem<T>,
    t: T,
    rhs_field: &GridField<T>,
    warm: Option<&GridField<T>>,
    opts: &SolverOptions<T>,
) -> Result<GridField<T>> {
    solve_normalized_report(np, t, rhs_field, warm, opts).map(|r| r.u)
}

/// [`solve_normalized`] with iteration counts and the final residual.
pub fn solve_normalized_report<T: Real>(
    np: &NormalizedProblem<T>,
    t: T,
    rhs_field: &GridField<T>,
    warm: Option<&GridField<T>>,
    opts: &SolverOptions<T>,
) -> Result<NewtonReport<T>> {
    opts.validate()?;
    let target = NormalizedSystem::new(np, t, rhs_field)?;
    if let Some(w) = warm {
        if let Ok(rep) = damped_newton(&target, w, opts) {
            return Ok(rep);
        }
    }
    let two = T::lit(2.0);
    let mut tau = T::zero();
    let mut u = np.base_solution();
    let mut dt = opts.dt_initial;
    let mut total = 0;
    let mut last = None;
    while tau < t {
        let next = (tau + dt).min(t);
        let sys = NormalizedSystem::new(np, next, rhs_field)?;
        match damped_newton(&sys, &u, opts) {
            Ok(rep) => {
                tau = next;
                total += rep.iterations;
                if rep.iterations <= 3 {
                    dt = (dt * two).min(opts.dt_max);
                }
                u = rep.u.clone();
                last = Some(rep);
            }
            Err(Error::NotAdmissible { .. } | Error::NoConvergence { .. }) => {
                dt = dt / two;
                if dt < opts.dt_min {
                    return Err(Error::ContinuationStalled {
                        t_reached: tau.as_f64(),
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }
    match last {
        Some(rep) => Ok(NewtonReport {
            iterations: total,
            ..rep
        }),
        // t == 0: the base solution is exact
        None => damped_newton(&target, &u, opts),
    }
}

/// One outer iteration of [`fixed_point_solve`].
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FixedPointRecord<T> {
    pub t: T,
    pub iteration: usize,
    /// `sup |u_{m+1} - u_m|`.
    pub gap: T,
    pub newton_iters: usize,
    /// Residual of the fixed-point equation itself at `u_{m+1}`.
    pub residual_sup: T,
    pub u_min: T,
    pub u_max: T,
    /// Diagnostics of `u_{m+1}` against the target equation's `S`.
    pub sigma_km1_max: T,
    pub hess_eig_max: T,
}

/// Fixed-point iteration for `det^{1/n}(Hess u + du (x) du - |du|^2/2 I + S) = f e^{-2u}`.
///
/// For each `t` of the schedule, iterates `u_{m+1} = H(u_m, t)` where
/// `H(u_m, t)` solves
/// `det^{1/n}(... + t S + (1-t) lambda_max I) = f^t e^{-2 t u_m} e^{-<u_{m+1}>}`,
/// until consecutive iterates agree to `fixed_point_tol`. The result at
/// `t = 1` is shifted by `<u>/2`, which turns it into a solution of the
/// unnormalized equation.
pub fn fixed_point_solve<T: Real>(
    p: &Problem<T>,
    t_schedule: &[T],
    opts: &SolverOptions<T>,
) -> Result<GridField<T>> {
    let mut records = Vec::new();
    fixed_point_solve_traced(p, t_schedule, opts, &mut records)
}

/// [`fixed_point_solve`] recording every outer iteration.
pub fn fixed_point_solve_traced<T: Real>(
    p: &Problem<T>,
    t_schedule: &[T],
    opts: &SolverOptions<T>,
    records: &mut Vec<FixedPointRecord<T>>,
) -> Result<GridField<T>> {
    opts.validate()?;
    let n = p.grid.dim();
    if p.k != n {
        return Err(Error::domain("fixed-point solver needs k = dimension"));
    }
    if p.psi.a != T::lit(-2.0) {
        return Err(Error::domain(
            "fixed-point solver needs psi exponent a = -2",
        ));
    }
    if p.sign != Sign::Positive {
        return Err(Error::domain(
            "fixed-point solver supports the positive variant only",
        ));
    }
    validate_schedule(t_schedule)?;
    harnack_gap(&p.s, p.grid.flat_diameter())?;
    let np = NormalizedProblem::new(p.s.clone(), T::one(), T::one())?;
    let two = T::lit(2.0);
    let mut u = np.base_solution();
    for &t in t_schedule {
        let mut converged = false;
        let mut gap = T::infinity();
        for m in 0..opts.max_fixed_point_iters {
            let rhs = p.psi.f.zip_map(&u, |f, um| f * (-two * um).exp());
            let rep = solve_normalized_report(&np, t, &rhs, Some(&u), opts)?;
            gap = rep.u.zip_map(&u, |a, b| a - b).sup_norm();
            let rhs_next = p.psi.f.zip_map(&rep.u, |f, um| f * (-two * um).exp());
            let fp_res = np.residual(&rep.u, t, &rhs_next)?.sup_norm();
            let diag = diagnostics(&rep.u, p)?;
            records.push(FixedPointRecord {
                t,
                iteration: m + 1,
                gap,
                newton_iters: rep.iterations,
                residual_sup: fp_res,
                u_min: rep.u.min(),
                u_max: rep.u.max(),
                sigma_km1_max: diag.sigma_km1_max,
                hess_eig_max: diag.hess_eig_max,
            });
            u = rep.u;
            if gap <= opts.fixed_point_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::FixedPointStalled {
                iterations: opts.max_fixed_point_iters,
                gap: gap.as_f64(),
            });
        }
    }
    let shift = u.integral() / two;
    Ok(u.map(|v| v + shift))
}

fn validate_schedule<T: Real>(ts: &[T]) -> Result<()> {
    let ok = !ts.is_empty()
        && ts.iter().all(|&t| t > T::zero() && t <= T::one())
        && ts.windows(2).all(|w| w[0] < w[1])
        && *ts.last().unwrap() == T::one();
    if ok {
        Ok(())
    } else {
        Err(Error::domain(
            "t_schedule must be strictly increasing in (0, 1] and end at 1",
        ))
    }
}
