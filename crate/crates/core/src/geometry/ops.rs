use super::field::{GridField, TensorField};
use super::grid::TorusGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::symfunc::{Sign, SymMat};

/// Central-difference gradient, one field per axis.
pub fn gradient<T: Real>(u: &GridField<T>) -> Vec<GridField<T>> {
    let grid = u.grid();
    let d = grid.dim();
    let mut comps = vec![Vec::with_capacity(u.len()); d];
    for idx in 0..u.len() {
        let g = grid.grad_at(u.values(), idx);
        for (a, c) in comps.iter_mut().enumerate() {
            c.push(g[a]);
        }
    }
    comps
        .into_iter()
        .map(|c| GridField::from_vec_unchecked(grid.clone(), c))
        .collect()
}

/// Discrete Hessian; exactly symmetric.
pub fn hessian<T: Real>(u: &GridField<T>) -> TensorField<T> {
    let grid = u.grid();
    let mats = (0..u.len()).map(|i| grid.hess_at(u.values(), i)).collect();
    TensorField::from_vec_unchecked(grid.clone(), mats)
}

/// `Hess u + s (du (x) du - |du|^2/2 I) + S` at one point, with `s = +1` for
/// the positive variant and `-1` for the negative one.
#[inline]
pub(crate) fn augmented_at<T: Real>(
    grid: &TorusGrid<T>,
    u: &[T],
    s: &SymMat<T>,
    idx: usize,
    sign: Sign,
) -> SymMat<T> {
    let d = grid.dim();
    let g = grid.grad_at(u, idx);
    let mut m = grid.hess_at(u, idx) + *s;
    let sg = match sign {
        Sign::Positive => T::one(),
        Sign::Negative => -T::one(),
    };
    let half_norm = g[..d].iter().map(|&x| x * x).sum::<T>() * T::lit(0.5);
    for i in 0..d {
        for j in i..d {
            let mut v = g[i] * g[j];
            if i == j {
                v = v - half_norm;
            }
            m.add_to(i, j, sg * v);
        }
    }
    m
}

/// The augmented Hessian of `u` with background tensor `s`.
///
/// `Positive`: `Hess u + du (x) du - |du|^2/2 I + S`;
/// `Negative`: `Hess u - du (x) du + |du|^2/2 I + S`.
pub fn augmented_hessian<T: Real>(
    u: &GridField<T>,
    s: &TensorField<T>,
    sign: Sign,
) -> Result<TensorField<T>> {
    if **u.grid() != **s.grid() {
        return Err(Error::Shape(
            "field and tensor live on different grids".into(),
        ));
    }
    let grid = u.grid();
    let mats = (0..u.len())
        .map(|i| augmented_at(grid, u.values(), s.at(i), i, sign))
        .collect();
    Ok(TensorField::from_vec_unchecked(grid.clone(), mats))
}

/// `Hess h + du (x) dh + dh (x) du - <du, dh> I`: the Hessian of `h` in the
/// conformal metric `e^{-2u} g`.
pub fn conformal_hessian<T: Real>(h: &GridField<T>, u: &GridField<T>) -> Result<TensorField<T>> {
    if !h.same_grid(u) {
        return Err(Error::Shape("h and u live on different grids".into()));
    }
    let grid = h.grid();
    let d = grid.dim();
    let mats = (0..h.len())
        .map(|i| {
            let gu = grid.grad_at(u.values(), i);
            let gh = grid.grad_at(h.values(), i);
            let dot: T = (0..d).map(|a| gu[a] * gh[a]).sum();
            let mut m = grid.hess_at(h.values(), i) + SymMat::sym_outer(&gu[..d], &gh[..d]);
            for a in 0..d {
                m.add_to(a, a, -dot);
            }
            m
        })
        .collect();
    Ok(TensorField::from_vec_unchecked(grid.clone(), mats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn grid(n: usize) -> Arc<TorusGrid<f64>> {
        Arc::new(TorusGrid::periodic_2pi(&[n, n]).unwrap())
    }

    #[test]
    fn constants_have_zero_derivatives() {
        let u = GridField::constant(grid(16), 3.0);
        for g in gradient(&u) {
            assert_eq!(g.sup_norm(), 0.0);
        }
        let h = hessian(&u);
        assert!(h.mats().iter().all(|m| m.frobenius() == 0.0));
    }

    #[test]
    fn gradient_of_sine_second_order() {
        let n = 64;
        let u = GridField::from_fn(grid(n), |x| x[0].sin());
        let g = gradient(&u);
        let err = g[0]
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| (v - u.grid().coords(i)[0].cos()).abs())
            .fold(0.0, f64::max);
        let h = std::f64::consts::TAU / n as f64;
        assert!(err <= h * h, "err {err}");
        assert_eq!(g[1].sup_norm(), 0.0);
    }

    #[test]
    fn gradient_and_hessian_of_product() {
        let n = 64;
        let gr = grid(n);
        let u = GridField::from_fn(gr.clone(), |x| x[0].sin() * x[1].cos());
        let g = gradient(&u);
        let hs = hessian(&u);
        let h = std::f64::consts::TAU / n as f64;
        for i in 0..u.len() {
            let x = gr.coords(i);
            let (sx, cx, sy, cy) = (x[0].sin(), x[0].cos(), x[1].sin(), x[1].cos());
            assert!((g[0].values()[i] - cx * cy).abs() <= h * h);
            assert!((g[1].values()[i] + sx * sy).abs() <= h * h);
            let m = hs.at(i);
            assert!((m.get(0, 0) + sx * cy).abs() <= h * h);
            assert!((m.get(1, 1) + sx * cy).abs() <= h * h);
            assert!((m.get(0, 1) + cx * sy).abs() <= h * h);
        }
    }

    #[test]
    fn hessian_of_x_only_function() {
        let u = GridField::from_fn(grid(32), |x| x[0].sin());
        for m in hessian(&u).mats() {
            assert_eq!(m.get(1, 1), 0.0);
            assert_eq!(m.get(0, 1), 0.0);
        }
    }

    #[test]
    fn augmented_of_zero_is_background() {
        let gr = grid(16);
        let s = TensorField::from_fn(gr.clone(), |x| {
            SymMat::from_rows(&[vec![2.0 + x[0].sin(), 0.1], vec![0.1, 1.0]]).unwrap()
        })
        .unwrap();
        let u = GridField::zeros(gr);
        for sign in [Sign::Positive, Sign::Negative] {
            assert_eq!(augmented_hessian(&u, &s, sign).unwrap(), s);
        }
    }

    #[test]
    fn conformal_hessian_trivial_cases() {
        let gr = grid(32);
        let h = GridField::from_fn(gr.clone(), |x| (x[0] + 2.0 * x[1]).cos());
        let zero = GridField::zeros(gr.clone());
        assert_eq!(conformal_hessian(&h, &zero).unwrap(), hessian(&h));
        let u = GridField::from_fn(gr.clone(), |x| 0.3 * x[1].sin());
        let one = GridField::constant(gr, 1.0);
        let c = conformal_hessian(&one, &u).unwrap();
        assert!(c.mats().iter().all(|m| m.frobenius() == 0.0));
    }

    #[test]
    fn conformal_hessian_of_u_itself() {
        let gr = grid(32);
        let u = GridField::from_fn(gr.clone(), |x| 0.2 * x[0].sin() * x[1].cos());
        let c = conformal_hessian(&u, &u).unwrap();
        let g = gradient(&u);
        let hs = hessian(&u);
        for i in 0..u.len() {
            let du = [g[0].values()[i], g[1].values()[i]];
            let norm2 = du[0] * du[0] + du[1] * du[1];
            for a in 0..2 {
                for b in 0..2 {
                    let delta = if a == b { norm2 } else { 0.0 };
                    let expect = hs.at(i).get(a, b) + 2.0 * du[a] * du[b] - delta;
                    assert!((c.at(i).get(a, b) - expect).abs() < 1e-13);
                }
            }
        }
    }
}
