use std::sync::Arc;

use super::problem::Problem;
use crate::error::{Error, Result};
use crate::geometry::ops::augmented_at;
use crate::geometry::{augmented_hessian, conformal_hessian, GridField, TorusGrid};
use crate::scalar::Real;
use crate::symfunc::{cone_check, newton_pass, sigma_k_root, ConeSpec, Sign, SymMat};

fn check_t<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "homotopy parameter t = {t} outside [0, 1]"
        )))
    }
}

fn check_grid<T: Real>(u: &GridField<T>, p: &Problem<T>) -> Result<()> {
    if **u.grid() != *p.grid {
        return Err(Error::Shape(
            "field and problem live on different grids".into(),
        ));
    }
    Ok(())
}

/// Every grid point's augmented Hessian lies in `Gamma_{k,t}^+`.
pub fn check_admissible<T: Real>(u: &GridField<T>, p: &Problem<T>, t: T) -> Result<()> {
    check_grid(u, p)?;
    let cone = p.cone(t);
    for i in 0..u.len() {
        let m = augmented_at(&p.grid, u.values(), p.s.at(i), i, p.sign);
        cone_check(&m, &cone).map_err(|e| e.at_point(i))?;
    }
    Ok(())
}

/// `t F_k + (1-t) sigma_1` of the augmented Hessian minus
/// `t psi(x, u) + (1-t) sigma_1(S) e^u`, pointwise. At `t = 1` this is the
/// residual of the target equation.
pub fn residual<T: Real>(u: &GridField<T>, p: &Problem<T>, t: T) -> Result<GridField<T>> {
    check_t(t)?;
    check_grid(u, p)?;
    let cone = p.cone(t);
    let one = T::one();
    let vals = u
        .values()
        .iter()
        .enumerate()
        .map(|(i, &ui)| {
            let m = augmented_at(&p.grid, u.values(), p.s.at(i), i, p.sign);
            let lhs = sigma_k_root(&m, &cone).map_err(|e| e.at_point(i))?;
            let rhs = t * p.psi.eval(i, ui) + (one - t) * p.trace_s(i) * ui.exp();
            Ok(lhs - rhs)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(GridField::from_vec_unchecked(u.grid().clone(), vals))
}

/// `sigma_k^{1/k}(Hess u - du (x) du + |du|^2/2 I + S) - psi(x, u)`, assembled
/// directly from the negative-variant augmented Hessian.
pub fn negative_residual<T: Real>(u: &GridField<T>, p: &Problem<T>) -> Result<GridField<T>> {
    check_grid(u, p)?;
    let aug = augmented_hessian(u, &p.s, Sign::Negative)?;
    let cone = ConeSpec::positive(p.k);
    let vals = aug
        .mats()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let root = sigma_k_root(m, &cone).map_err(|e| e.at_point(i))?;
            Ok(root - p.psi.eval(i, u.values()[i]))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(GridField::from_vec_unchecked(u.grid().clone(), vals))
}

/// Pointwise second-order coefficient of the blended operator's derivative:
/// `(t/k) sigma_k^{1/k - 1} T_{k-1} + (1 - t) I`.
fn blended_coefficient<T: Real>(
    m: &SymMat<T>,
    k: usize,
    t: T,
    cone: &ConeSpec<T>,
) -> Result<SymMat<T>> {
    cone_check(m, cone)?;
    let n = m.dim();
    let mut c = SymMat::scaled_identity(n, T::one() - t);
    if t > T::zero() {
        // sigma_k^{1/k} must exist wherever its weight is nonzero
        cone_check(m, &ConeSpec::positive(k))?;
        let pass = newton_pass(m, k);
        let kk = T::from_usize_lossy(k);
        let w = t / kk * pass.sigmas[k].powf(T::one() / kk - T::one());
        c = c + pass.t_prev * w;
    }
    Ok(c)
}

/// Derivative of [`residual`] at `u` applied to `h`:
/// `C : Hess_{g~} h - (t a psi + (1-t) sigma_1(S) e^u) h`, where `C` is the
/// blended coefficient and `Hess_{g~}` the conformal Hessian for the
/// conformal factor `u` (or `-u` for the negative variant).
pub fn linearize_apply<T: Real>(
    u: &GridField<T>,
    h: &GridField<T>,
    p: &Problem<T>,
    t: T,
) -> Result<GridField<T>> {
    check_t(t)?;
    check_grid(u, p)?;
    check_grid(h, p)?;
    let factor = match p.sign {
        Sign::Positive => u.clone(),
        Sign::Negative => u.map(|x| -x),
    };
    let conf = conformal_hessian(h, &factor)?;
    let cone = p.cone(t);
    let one = T::one();
    let vals = (0..u.len())
        .map(|i| {
            let ui = u.values()[i];
            let m = augmented_at(&p.grid, u.values(), p.s.at(i), i, p.sign);
            let c = blended_coefficient(&m, p.k, t, &cone).map_err(|e| e.at_point(i))?;
            let zeroth = t * p.psi.a * p.psi.eval(i, ui) + (one - t) * p.trace_s(i) * ui.exp();
            Ok(c.contract(conf.at(i)) - zeroth * h.values()[i])
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(GridField::from_vec_unchecked(u.grid().clone(), vals))
}

/// The linearized operator in assembled, matrix-free form:
///
/// `(L h)_i = C_i : Hess h + b_i . grad h + c_i h_i + w_i <h>`
///
/// where `<h>` is the integral of `h` over the torus. The last term is only
/// present for mean-coupled (normalized) equations.
#[derive(Debug, Clone)]
pub struct Linearization<T> {
    grid: Arc<TorusGrid<T>>,
    coeff: Vec<SymMat<T>>,
    drift: Vec<[T; 3]>,
    zeroth: Vec<T>,
    mean_weight: Option<Vec<T>>,
}

impl<T: Real> Linearization<T> {
    /// Builds the operator from its pointwise coefficient `C_i`, the
    /// conformal factor's gradient sign and the zeroth-order term.
    pub(crate) fn assemble(
        grid: Arc<TorusGrid<T>>,
        u: &[T],
        coeff: Vec<SymMat<T>>,
        sign: Sign,
        zeroth: Vec<T>,
        mean_weight: Option<Vec<T>>,
    ) -> Self {
        let d = grid.dim();
        let sg = match sign {
            Sign::Positive => T::one(),
            Sign::Negative => -T::one(),
        };
        let two = T::lit(2.0);
        // C : (du (x) dh + dh (x) du - <du,dh> I) = (2 C du - tr(C) du) . dh
        let drift = coeff
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let g = grid.grad_at(u, i);
                let cg = c.mat_vec(&g[..d]);
                let tr = c.trace();
                let mut b = [T::zero(); 3];
                for a in 0..d {
                    b[a] = sg * (two * cg[a] - tr * g[a]);
                }
                b
            })
            .collect();
        Linearization {
            grid,
            coeff,
            drift,
            zeroth,
            mean_weight,
        }
    }

    pub fn len(&self) -> usize {
        self.zeroth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeroth.is_empty()
    }

    pub fn coefficients(&self) -> &[SymMat<T>] {
        &self.coeff
    }

    /// `y = L x`.
    pub fn apply(&self, x: &[T], y: &mut [T]) {
        let d = self.grid.dim();
        let mean = self
            .mean_weight
            .as_ref()
            .map(|_| x.iter().copied().sum::<T>() * self.grid.cell_volume());
        for (i, yi) in y.iter_mut().enumerate() {
            let hx = self.grid.hess_at(x, i);
            let gx = self.grid.grad_at(x, i);
            let mut v = self.coeff[i].contract(&hx) + self.zeroth[i] * x[i];
            for a in 0..d {
                v = v + self.drift[i][a] * gx[a];
            }
            if let (Some(w), Some(m)) = (&self.mean_weight, mean) {
                v = v + w[i] * m;
            }
            *yi = v;
        }
    }

    /// Diagonal of the discrete operator (the stencil's center weights).
    pub fn diagonal(&self) -> Vec<T> {
        let d = self.grid.dim();
        let h = self.grid.spacing();
        let two = T::lit(2.0);
        let cell = self.grid.cell_volume();
        (0..self.len())
            .map(|i| {
                let mut v = self.zeroth[i];
                for a in 0..d {
                    v = v - two * self.coeff[i].get(a, a) / (h[a] * h[a]);
                }
                if let Some(w) = &self.mean_weight {
                    v = v + w[i] * cell;
                }
                v
            })
            .collect()
    }
}

/// Assembles the derivative of [`residual`] at `u`.
pub fn linearize<T: Real>(u: &GridField<T>, p: &Problem<T>, t: T) -> Result<Linearization<T>> {
    check_t(t)?;
    check_grid(u, p)?;
    let cone = p.cone(t);
    let one = T::one();
    let mut coeff = Vec::with_capacity(u.len());
    let mut zeroth = Vec::with_capacity(u.len());
    for (i, &ui) in u.values().iter().enumerate() {
        let m = augmented_at(&p.grid, u.values(), p.s.at(i), i, p.sign);
        coeff.push(blended_coefficient(&m, p.k, t, &cone).map_err(|e| e.at_point(i))?);
        zeroth.push(-(t * p.psi.a * p.psi.eval(i, ui) + (one - t) * p.trace_s(i) * ui.exp()));
    }
    Ok(Linearization::assemble(
        p.grid.clone(),
        u.values(),
        coeff,
        p.sign,
        zeroth,
        None,
    ))
}
