use serde::Serialize;

use crate::error::Result;
use crate::geometry::ops::augmented_at;
use crate::geometry::GridField;
use crate::pde::Problem;
use crate::scalar::Real;
use crate::symfunc::{eigen_sym, sigma_mat, SymMat};

/// Quantities the gradient and second-derivative estimates control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics<T> {
    /// `sup |grad u|`.
    pub grad_sup: T,
    /// Max over points of the top eigenvalue of `Hess u + du (x) du + S`.
    pub hess_eig_max: T,
    /// Max over points of `sigma_{k-1}` of the augmented Hessian.
    pub sigma_km1_max: T,
}

pub fn diagnostics<T: Real>(u: &GridField<T>, p: &Problem<T>) -> Result<Diagnostics<T>> {
    if **u.grid() != *p.grid {
        return Err(crate::Error::Shape(
            "field and problem live on different grids".into(),
        ));
    }
    let grid = &p.grid;
    let d = grid.dim();
    let mut out = Diagnostics {
        grad_sup: T::zero(),
        hess_eig_max: T::neg_infinity(),
        sigma_km1_max: T::neg_infinity(),
    };
    for i in 0..u.len() {
        let g = grid.grad_at(u.values(), i);
        let norm = (0..d).map(|a| g[a] * g[a]).sum::<T>().sqrt();
        out.grad_sup = out.grad_sup.max(norm);
        let m = grid.hess_at(u.values(), i) + SymMat::outer(&g[..d]) + *p.s.at(i);
        out.hess_eig_max = out.hess_eig_max.max(eigen_sym(&m).max());
        let aug = augmented_at(grid, u.values(), p.s.at(i), i, p.sign);
        out.sigma_km1_max = out.sigma_km1_max.max(sigma_mat(&aug, p.k - 1)?);
    }
    Ok(out)
}
