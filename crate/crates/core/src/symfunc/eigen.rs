use serde::{Deserialize, Serialize};

use super::matrix::{SymMat, MAX_DIM};
use crate::scalar::Real;

/// Eigenvalues of a symmetric matrix, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenList<T> {
    values: Vec<T>,
}

impl<T: Real> EigenList<T> {
    /// Sorts `values` descending.
    pub fn new(mut values: Vec<T>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        EigenList { values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> T {
        self.values[0]
    }

    pub fn min(&self) -> T {
        self.values[self.values.len() - 1]
    }
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi diagonalization. Returns eigenvalues (unsorted, in column
/// order) and the orthogonal matrix whose columns are the eigenvectors.
fn jacobi<T: Real>(m: &SymMat<T>) -> (Vec<T>, [[T; MAX_DIM]; MAX_DIM]) {
    let n = m.dim();
    let mut a = *m.raw();
    let mut v = [[T::zero(); MAX_DIM]; MAX_DIM];
    for (i, row) in v.iter_mut().enumerate().take(n) {
        row[i] = T::one();
    }
    let norm = m.frobenius();
    if norm == T::zero() {
        return (vec![T::zero(); n], v);
    }
    let target = T::eigen_tol() * norm;
    let two = T::lit(2.0);

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + two * a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[r][q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[p][r];
                    let aqr = a[q][r];
                    a[p][r] = c * apr - s * aqr;
                    a[q][r] = s * apr + c * aqr;
                }
                // exact zero for the annihilated pair
                a[p][q] = T::zero();
                a[q][p] = T::zero();
                for row in v.iter_mut().take(n) {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Eigenvalues of a symmetric matrix, sorted descending.
pub fn eigen_sym<T: Real>(m: &SymMat<T>) -> EigenList<T> {
    EigenList::new(jacobi(m).0)
}

/// Eigenvalues (descending) with matching unit eigenvectors as columns of the
/// returned array.
pub fn eigen_decompose<T: Real>(m: &SymMat<T>) -> (EigenList<T>, [[T; MAX_DIM]; MAX_DIM]) {
    let n = m.dim();
    let (vals, v) = jacobi(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        vals[j]
            .partial_cmp(&vals[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut q = [[T::zero(); MAX_DIM]; MAX_DIM];
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            q[r][col] = v[r][src];
        }
    }
    let sorted = order.iter().map(|&i| vals[i]).collect();
    (EigenList { values: sorted }, q)
}
