use std::sync::Arc;

use super::grid::TorusGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::symfunc::SymMat;

/// Scalar values at every point of a [`TorusGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T> {
    grid: Arc<TorusGrid<T>>,
    values: Vec<T>,
}

impl<T: Real> GridField<T> {
    /// Rejects a length mismatch or non-finite entries.
    pub fn new(grid: Arc<TorusGrid<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "non-finite field value at point {i}"
            )));
        }
        Ok(GridField { grid, values })
    }

    pub(crate) fn from_vec_unchecked(grid: Arc<TorusGrid<T>>, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        GridField { grid, values }
    }

    pub fn constant(grid: Arc<TorusGrid<T>>, c: T) -> Self {
        let n = grid.len();
        GridField {
            grid,
            values: vec![c; n],
        }
    }

    pub fn zeros(grid: Arc<TorusGrid<T>>) -> Self {
        Self::constant(grid, T::zero())
    }

    /// Samples `f` at the coordinates of every grid point.
    pub fn from_fn(grid: Arc<TorusGrid<T>>, f: impl Fn(&[T]) -> T) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.coords(i))).collect();
        GridField { grid, values }
    }

    pub fn grid(&self) -> &Arc<TorusGrid<T>> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        GridField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise `f(self_i, other_i)`.
    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        debug_assert!(self.same_grid(other));
        GridField {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: T, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + c * b)
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v < self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn sup_norm(&self) -> T {
        sup_norm(&self.values)
    }

    /// Arithmetic mean over grid points.
    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::from_usize_lossy(self.values.len())
    }

    /// Riemann sum `sum_i v_i * cell volume`, i.e. the integral over the torus.
    pub fn integral(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.grid.cell_volume()
    }
}

/// Max-abs norm; a NaN entry makes the norm infinite.
pub(crate) fn sup_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| {
        if x.is_nan() {
            T::infinity()
        } else {
            m.max(x.abs())
        }
    })
}

/// One symmetric matrix per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorField<T> {
    grid: Arc<TorusGrid<T>>,
    mats: Vec<SymMat<T>>,
}

impl<T: Real> TensorField<T> {
    pub fn new(grid: Arc<TorusGrid<T>>, mats: Vec<SymMat<T>>) -> Result<Self> {
        if mats.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} matrices for a grid of {} points",
                mats.len(),
                grid.len()
            )));
        }
        if let Some(i) = mats.iter().position(|m| m.dim() != grid.dim()) {
            return Err(Error::Shape(format!(
                "matrix at point {i} has dimension {} on a {}-dimensional grid",
                mats[i].dim(),
                grid.dim()
            )));
        }
        Ok(TensorField { grid, mats })
    }

    pub fn constant(grid: Arc<TorusGrid<T>>, m: SymMat<T>) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![m; n])
    }

    pub fn from_fn(grid: Arc<TorusGrid<T>>, f: impl Fn(&[T]) -> SymMat<T>) -> Result<Self> {
        let mats = (0..grid.len()).map(|i| f(&grid.coords(i))).collect();
        Self::new(grid, mats)
    }

    pub(crate) fn from_vec_unchecked(grid: Arc<TorusGrid<T>>, mats: Vec<SymMat<T>>) -> Self {
        TensorField { grid, mats }
    }

    pub fn grid(&self) -> &Arc<TorusGrid<T>> {
        &self.grid
    }

    pub fn mats(&self) -> &[SymMat<T>] {
        &self.mats
    }

    pub fn at(&self, idx: usize) -> &SymMat<T> {
        &self.mats[idx]
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// Largest entrywise difference to `other`.
    pub fn sup_distance(&self, other: &Self) -> T {
        self.mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let d = *a - *b;
                let n = d.dim();
                (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .fold(T::zero(), |m, (i, j)| m.max(d.get(i, j).abs()))
            })
            .fold(T::zero(), T::max)
    }

    pub fn map(&self, f: impl Fn(&SymMat<T>) -> SymMat<T>) -> Self {
        TensorField {
            grid: self.grid.clone(),
            mats: self.mats.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<TorusGrid<f64>> {
        Arc::new(TorusGrid::new(&[8, 8], &[2.0, 4.0]).unwrap())
    }

    #[test]
    fn rejects_wrong_length_and_nan() {
        assert!(GridField::new(grid(), vec![0.0; 63]).is_err());
        let mut v = vec![0.0; 64];
        v[5] = f64::NAN;
        assert!(GridField::new(grid(), v).is_err());
    }

    #[test]
    fn reductions() {
        let f = GridField::from_fn(grid(), |x| x[0] - x[1]);
        assert_eq!(f.max(), 1.75);
        assert_eq!(f.min(), -3.5);
        assert_eq!(f.sup_norm(), 3.5);
        assert_eq!(f.values()[f.argmax()], 1.75);
        let one = GridField::constant(grid(), 1.0);
        assert!((one.integral() - 8.0).abs() < 1e-14);
        assert_eq!(one.mean(), 1.0);
    }

    #[test]
    fn tensor_dim_checked() {
        let g = grid();
        assert!(TensorField::constant(g.clone(), SymMat::identity(3)).is_err());
        assert!(TensorField::constant(g, SymMat::identity(2)).is_ok());
    }
}
