use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 8;

/// Dense symmetric matrix of dimension `2..=8` stored inline.
///
/// Every mutation writes both `(i, j)` and `(j, i)`, so the stored entries are
/// exactly symmetric.
#[derive(Clone, Copy, PartialEq)]
pub struct SymMat<T> {
    dim: usize,
    a: [[T; MAX_DIM]; MAX_DIM],
}

impl<T: Real> SymMat<T> {
    /// Zero matrix. Panics if `dim` is outside `1..=MAX_DIM`.
    pub fn zeros(dim: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "SymMat dimension {dim} outside 1..={MAX_DIM}"
        );
        SymMat {
            dim,
            a: [[T::zero(); MAX_DIM]; MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, T::one())
    }

    pub fn scaled_identity(dim: usize, c: T) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.a[i][i] = c;
        }
        m
    }

    pub fn from_diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.a[i][i] = v;
        }
        m
    }

    /// Builds a matrix from rows; rejects non-square or non-symmetric input.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::Shape(format!("dimension {n} outside 2..={MAX_DIM}")));
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row {i} has length {} != {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if rows[j][i] != v {
                    return Err(Error::Shape(format!("entry ({i},{j}) is not symmetric")));
                }
                m.a[i][j] = v;
            }
        }
        Ok(m)
    }

    /// Symmetric part `(M + M^T)/2` of a general square array.
    pub fn symmetrize(dim: usize, full: &[[T; MAX_DIM]; MAX_DIM]) -> Self {
        let half = T::lit(0.5);
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.a[i][i] = full[i][i];
            for j in (i + 1)..dim {
                let v = (full[i][j] + full[j][i]) * half;
                m.a[i][j] = v;
                m.a[j][i] = v;
            }
        }
        m
    }

    /// `u v^T + v u^T`.
    pub fn sym_outer(u: &[T], v: &[T]) -> Self {
        let mut m = Self::zeros(u.len());
        for i in 0..u.len() {
            for j in i..u.len() {
                let x = u[i] * v[j] + u[j] * v[i];
                m.a[i][j] = x;
                m.a[j][i] = x;
            }
        }
        m
    }

    /// `u u^T`.
    pub fn outer(u: &[T]) -> Self {
        let mut m = Self::zeros(u.len());
        for i in 0..u.len() {
            for j in i..u.len() {
                let x = u[i] * u[j];
                m.a[i][j] = x;
                m.a[j][i] = x;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        debug_assert!(i < self.dim && j < self.dim);
        self.a[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.dim && j < self.dim);
        self.a[i][j] = v;
        self.a[j][i] = v;
    }

    /// Adds `v` to `(i, j)` and, off the diagonal, to `(j, i)`.
    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        self.a[i][j] = self.a[i][j] + v;
        if i != j {
            self.a[j][i] = self.a[j][i] + v;
        }
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.dim)
            .map(|i| self.a[i][..self.dim].to_vec())
            .collect()
    }

    pub(crate) fn raw(&self) -> &[[T; MAX_DIM]; MAX_DIM] {
        &self.a
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.a[i][i]).sum()
    }

    pub fn frobenius(&self) -> T {
        self.contract(self).sqrt()
    }

    /// Full contraction `sum_ij A_ij B_ij`.
    pub fn contract(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim, other.dim);
        let mut s = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                s = s + self.a[i][j] * other.a[i][j];
            }
        }
        s
    }

    pub fn mat_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.a[i][j] * x[j]).sum())
            .collect()
    }

    /// Raw product `A B` as a full array (not symmetric in general).
    pub fn product(&self, other: &Self) -> [[T; MAX_DIM]; MAX_DIM] {
        let n = self.dim;
        let mut out = [[T::zero(); MAX_DIM]; MAX_DIM];
        for i in 0..n {
            for j in 0..n {
                let mut s = T::zero();
                for l in 0..n {
                    s = s + self.a[i][l] * other.a[l][j];
                }
                out[i][j] = s;
            }
        }
        out
    }

    /// Product of two commuting symmetric matrices (e.g. polynomials in the
    /// same matrix); the result is symmetrized to absorb rounding.
    pub fn commuting_product(&self, other: &Self) -> Self {
        Self::symmetrize(self.dim, &self.product(other))
    }

    /// `Q diag(d) Q^T` for a column-orthogonal `Q` given as a full array.
    pub fn from_eigen(q: &[[T; MAX_DIM]; MAX_DIM], d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = T::zero();
                for l in 0..n {
                    s = s + q[i][l] * d[l] * q[j][l];
                }
                m.a[i][j] = s;
                m.a[j][i] = s;
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.a[i][j] = f(self.a[i][j]);
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.a[i][j].is_finite()))
    }
}

impl<T: Real> Add for SymMat<T> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.a[i][j] = self.a[i][j] + rhs.a[i][j];
            }
        }
        self
    }
}

impl<T: Real> Sub for SymMat<T> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.a[i][j] = self.a[i][j] - rhs.a[i][j];
            }
        }
        self
    }
}

impl<T: Real> Mul<T> for SymMat<T> {
    type Output = Self;
    fn mul(self, c: T) -> Self {
        self.map(|x| x * c)
    }
}

impl<T: Real> Neg for SymMat<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<T: fmt::Debug> fmt::Debug for SymMat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.a[..self.dim].iter().map(|r| &r[..self.dim]))
            .finish()
    }
}
