use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{GridField, TensorField, TorusGrid};
use crate::scalar::Real;
use crate::symfunc::{cone_check, ConeSpec, Sign};

/// Right-hand side `psi(x, u) = f(x) e^{a u}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiSpec<T> {
    pub f: GridField<T>,
    pub a: T,
}

impl<T: Real> PsiSpec<T> {
    pub fn new(f: GridField<T>, a: T) -> Result<Self> {
        if !(f.min() > T::zero()) {
            return Err(Error::domain("psi factor f must be strictly positive"));
        }
        if a == T::zero() || !a.is_finite() {
            return Err(Error::domain("psi exponent a must be finite and nonzero"));
        }
        Ok(PsiSpec { f, a })
    }

    /// `psi(x_i, u)`.
    #[inline]
    pub fn eval(&self, idx: usize, u: T) -> T {
        self.f.values()[idx] * (self.a * u).exp()
    }
}

/// A complete equation on a flat torus.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem<T> {
    pub grid: Arc<TorusGrid<T>>,
    pub k: usize,
    pub s: TensorField<T>,
    pub psi: PsiSpec<T>,
    /// Variant of the gradient terms in the augmented Hessian.
    pub sign: Sign,
}

impl<T: Real> Problem<T> {
    /// Validates `1 <= k <= dim`, matching grids, and `S in Gamma_k^+` at
    /// every grid point.
    pub fn new(k: usize, s: TensorField<T>, psi: PsiSpec<T>, sign: Sign) -> Result<Self> {
        let grid = s.grid().clone();
        if !(1..=grid.dim()).contains(&k) {
            return Err(Error::domain(format!("k = {k} outside 1..={}", grid.dim())));
        }
        if **psi.f.grid() != *grid {
            return Err(Error::Shape("psi and S live on different grids".into()));
        }
        let cone = ConeSpec::positive(k);
        for (i, m) in s.mats().iter().enumerate() {
            cone_check(m, &cone).map_err(|e| match e {
                Error::NotAdmissible { order, value, .. } => Error::domain(format!(
                    "S leaves Gamma_{k}^+ at point {i} (sigma_{order} = {value:e})"
                )),
                other => other,
            })?;
        }
        Ok(Problem {
            grid,
            k,
            s,
            psi,
            sign,
        })
    }

    /// `sigma_1(S)` at point `idx`.
    #[inline]
    pub fn trace_s(&self, idx: usize) -> T {
        self.s.at(idx).trace()
    }

    pub fn cone(&self, t: T) -> ConeSpec<T> {
        ConeSpec::positive(self.k).with_t(t)
    }
}
