use super::catalog::CatalogFn;
use crate::error::{Error, Result};
use crate::geometry::{GridField, TensorField};
use crate::scalar::Real;
use crate::symfunc::{sigma_k_root, ConeSpec, Sign, SymMat};

/// A target field together with the `f` that makes it an exact solution of
/// `sigma_k^{1/k}(augmented Hessian) = f e^u` in the continuum.
#[derive(Debug, Clone, PartialEq)]
pub struct Manufactured<T> {
    pub target: GridField<T>,
    pub f: GridField<T>,
}

/// Evaluates `f = sigma_k^{1/k}(Hess u* +- (du* (x) du* - |du*|^2/2 I) + S) e^{-u*}`
/// from exact derivatives of `target`. Fails with `NotAdmissible` where the
/// matrix leaves `Gamma_k^+`.
pub fn manufacture<T: Real>(
    target: &CatalogFn,
    s: &TensorField<T>,
    k: usize,
    sign: Sign,
) -> Result<Manufactured<T>> {
    let grid = s.grid().clone();
    let d = grid.dim();
    if !(1..=d).contains(&k) {
        return Err(Error::domain(format!("k = {k} outside 1..={d}")));
    }
    let sg = match sign {
        Sign::Positive => T::one(),
        Sign::Negative => -T::one(),
    };
    let half = T::lit(0.5);
    let cone = ConeSpec::positive(k);
    let mut u = Vec::with_capacity(grid.len());
    let mut f = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let x = grid.coords(i);
        let jet = target.jet(&grid, &x);
        let g = &jet.grad[..d];
        let g2: T = g.iter().map(|&v| v * v).sum();
        let mut m = jet.hess + *s.at(i) + SymMat::outer(g) * sg;
        for a in 0..d {
            m.add_to(a, a, -sg * half * g2);
        }
        let root = sigma_k_root(&m, &cone).map_err(|e| e.at_point(i))?;
        u.push(jet.value);
        f.push(root * (-jet.value).exp());
    }
    Ok(Manufactured {
        target: GridField::new(grid.clone(), u)?,
        f: GridField::new(grid, f)?,
    })
}
