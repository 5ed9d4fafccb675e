use super::eigen::eigen_sym;
use super::matrix::{SymMat, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `sigma_k(lambda)`, the k-th elementary symmetric polynomial, with
/// `sigma_0 = 1`.
///
/// Uses the prefix recurrence `e_j <- e_j + x e_{j-1}` (highest `j` first),
/// which costs `O(n k)` and never enumerates subsets.
pub fn sigma<T: Real>(lambda: &[T], k: usize) -> Result<T> {
    if k > lambda.len() {
        return Err(Error::domain(format!(
            "sigma order {k} exceeds length {}",
            lambda.len()
        )));
    }
    let mut e = [T::zero(); MAX_DIM + 1];
    let mut e_vec;
    let e: &mut [T] = if k < e.len() {
        &mut e[..=k]
    } else {
        e_vec = vec![T::zero(); k + 1];
        &mut e_vec
    };
    e[0] = T::one();
    for &x in lambda {
        for j in (1..=k).rev() {
            e[j] = e[j] + x * e[j - 1];
        }
    }
    Ok(e[k])
}

/// `sigma_k` of the eigenvalues of `a`.
pub fn sigma_mat<T: Real>(a: &SymMat<T>, k: usize) -> Result<T> {
    check_order(a, k)?;
    sigma(eigen_sym(a).values(), k)
}

/// `sigma_k(a)` from the characteristic-polynomial route: the trace
/// recurrence `sigma_j = tr(A T_{j-1}) / j` (Faddeev-LeVerrier). Agrees with
/// [`sigma_mat`] to rounding on well-conditioned input.
pub fn sigma_mat_charpoly<T: Real>(a: &SymMat<T>, k: usize) -> Result<T> {
    check_order(a, k)?;
    Ok(newton_pass(a, k.max(1)).sigmas[k])
}

/// `T_q(A) = sigma_q I - sigma_{q-1} A + ... + (-1)^q A^q`, computed by the
/// recurrence `T_0 = I`, `T_q = sigma_q I - A T_{q-1}`.
pub fn newton_transform<T: Real>(a: &SymMat<T>, q: usize) -> Result<SymMat<T>> {
    check_order(a, q)?;
    let n = a.dim();
    let mut t = SymMat::identity(n);
    for j in 1..=q {
        let at = a.commuting_product(&t);
        let s = at.trace() / T::from_usize_lossy(j);
        t = SymMat::scaled_identity(n, s) - at;
    }
    Ok(t)
}

fn check_order<T: Real>(a: &SymMat<T>, q: usize) -> Result<()> {
    if q > a.dim() {
        Err(Error::domain(format!(
            "order {q} exceeds matrix dimension {}",
            a.dim()
        )))
    } else {
        Ok(())
    }
}

/// `sigma_0..=sigma_k` of a matrix together with `T_{k-1}`, from a single
/// pass of the Newton-transformation recurrence.
#[derive(Debug, Clone, Copy)]
pub struct NewtonPass<T> {
    pub sigmas: [T; MAX_DIM + 1],
    /// `T_{k-1}(A)`.
    pub t_prev: SymMat<T>,
}

/// Runs the recurrence up to order `k` (`1 <= k <= dim`).
///
/// `sigma_j = tr(A T_{j-1}) / j` is the Euler identity `T_{j-1} : A = j sigma_j`
/// used as the definition of the next coefficient.
pub fn newton_pass<T: Real>(a: &SymMat<T>, k: usize) -> NewtonPass<T> {
    let n = a.dim();
    assert!(
        (1..=n).contains(&k),
        "newton_pass order {k} outside 1..={n}"
    );
    let mut sigmas = [T::zero(); MAX_DIM + 1];
    sigmas[0] = T::one();
    let mut t = SymMat::identity(n);
    for j in 1..=k {
        let at = a.commuting_product(&t);
        sigmas[j] = at.trace() / T::from_usize_lossy(j);
        if j < k {
            t = SymMat::scaled_identity(n, sigmas[j]) - at;
        }
    }
    NewtonPass { sigmas, t_prev: t }
}
