//! Named smooth periodic functions used for data (`f`, perturbations of `S`)
//! and manufactured solutions. Every entry has `base + amplitude * shape`,
//! where `shape` is one of a few sine/cosine products in the angle
//! coordinates `theta_a = 2 pi x_a / L_a`. Derivatives are exact.

use serde::{Deserialize, Serialize};

use std::sync::Arc;

use crate::error::Result;
use crate::geometry::{GridField, TorusGrid};
use crate::scalar::Real;
use crate::symfunc::SymMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Constant,
    SinX,
    CosX,
    SinXCosY,
    CosXCosY,
    /// `sum_a sin(theta_a)`
    SinSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogFn {
    pub shape: Shape,
    #[serde(default)]
    pub base: f64,
    #[serde(default)]
    pub amplitude: f64,
}

/// Value, gradient and Hessian of a catalog function at one point.
#[derive(Debug, Clone, Copy)]
pub struct Jet<T> {
    pub value: T,
    pub grad: [T; 3],
    pub hess: SymMat<T>,
}

impl CatalogFn {
    pub fn constant(c: f64) -> Self {
        CatalogFn {
            shape: Shape::Constant,
            base: c,
            amplitude: 0.0,
        }
    }

    pub fn new(shape: Shape, base: f64, amplitude: f64) -> Self {
        CatalogFn {
            shape,
            base,
            amplitude,
        }
    }

    pub fn value<T: Real>(&self, grid: &TorusGrid<T>, x: &[T]) -> T {
        self.jet(grid, x).value
    }

    /// Samples the function at every grid point.
    pub fn field<T: Real>(&self, grid: &Arc<TorusGrid<T>>) -> Result<GridField<T>> {
        GridField::new(
            grid.clone(),
            (0..grid.len())
                .map(|i| self.value(grid, &grid.coords(i)))
                .collect(),
        )
    }

    /// Exact value and derivatives at physical coordinates `x`.
    pub fn jet<T: Real>(&self, grid: &TorusGrid<T>, x: &[T]) -> Jet<T> {
        let d = grid.dim();
        let scale: Vec<T> = grid.lengths().iter().map(|&l| T::TAU() / l).collect();
        let th: Vec<T> = x.iter().zip(&scale).map(|(&xi, &s)| xi * s).collect();
        let mut value = T::zero();
        let mut grad = [T::zero(); 3];
        let mut hess = SymMat::zeros(d);
        match self.shape {
            Shape::Constant => {}
            Shape::SinX => {
                value = th[0].sin();
                grad[0] = th[0].cos();
                hess.set(0, 0, -th[0].sin());
            }
            Shape::CosX => {
                value = th[0].cos();
                grad[0] = -th[0].sin();
                hess.set(0, 0, -th[0].cos());
            }
            Shape::SinXCosY => {
                let (s0, c0, s1, c1) = (th[0].sin(), th[0].cos(), th[1].sin(), th[1].cos());
                value = s0 * c1;
                grad[0] = c0 * c1;
                grad[1] = -s0 * s1;
                hess.set(0, 0, -s0 * c1);
                hess.set(1, 1, -s0 * c1);
                hess.set(0, 1, -c0 * s1);
            }
            Shape::CosXCosY => {
                let (s0, c0, s1, c1) = (th[0].sin(), th[0].cos(), th[1].sin(), th[1].cos());
                value = c0 * c1;
                grad[0] = -s0 * c1;
                grad[1] = -c0 * s1;
                hess.set(0, 0, -c0 * c1);
                hess.set(1, 1, -c0 * c1);
                hess.set(0, 1, s0 * s1);
            }
            Shape::SinSum => {
                for a in 0..d {
                    value = value + th[a].sin();
                    grad[a] = th[a].cos();
                    hess.set(a, a, -th[a].sin());
                }
            }
        }
        let amp = T::lit(self.amplitude);
        for a in 0..d {
            grad[a] = grad[a] * amp * scale[a];
            for b in a..d {
                hess.set(a, b, hess.get(a, b) * amp * scale[a] * scale[b]);
            }
        }
        Jet {
            value: T::lit(self.base) + amp * value,
            grad,
            hess,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        let grid = TorusGrid::<f64>::new(&[8, 8, 8], &[2.0, 3.0, 5.0]).unwrap();
        let x = [0.37, 1.1, 2.9];
        let eps = 1e-5;
        for shape in [
            Shape::Constant,
            Shape::SinX,
            Shape::CosX,
            Shape::SinXCosY,
            Shape::CosXCosY,
            Shape::SinSum,
        ] {
            let f = CatalogFn::new(shape, 0.5, 0.3);
            let j = f.jet(&grid, &x);
            for a in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[a] += eps;
                xm[a] -= eps;
                let fd = (f.value(&grid, &xp) - f.value(&grid, &xm)) / (2.0 * eps);
                assert!((fd - j.grad[a]).abs() < 1e-8, "{shape:?} grad {a}");
                let jp = f.jet(&grid, &xp);
                let jm = f.jet(&grid, &xm);
                for b in 0..3 {
                    let fd2 = (jp.grad[b] - jm.grad[b]) / (2.0 * eps);
                    assert!(
                        (fd2 - j.hess.get(a, b)).abs() < 1e-7,
                        "{shape:?} hess {a}{b}"
                    );
                }
            }
        }
    }
}
