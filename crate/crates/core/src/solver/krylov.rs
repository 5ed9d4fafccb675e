//! Matrix-free Krylov solvers for the nonsymmetric linearized operators.
//!
//! Both solvers use right preconditioning by a diagonal, so the reported
//! residual is the true residual of the unpreconditioned system.

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearOutcome<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    /// `|b - A x| / |b|` in the 2-norm.
    pub relative_residual: T,
    pub converged: bool,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn true_residual<T: Real>(op: &impl Fn(&[T], &mut [T]), b: &[T], x: &[T], r: &mut [T]) {
    op(x, r);
    for (ri, &bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
}

fn inverse_diagonal<T: Real>(diag: &[T]) -> Vec<T> {
    diag.iter()
        .map(|&d| {
            if d != T::zero() && d.is_finite() {
                T::one() / d
            } else {
                T::one()
            }
        })
        .collect()
}

/// BiCGStab with right diagonal preconditioning, starting from `x0`.
pub fn bicgstab<T: Real>(
    op: impl Fn(&[T], &mut [T]),
    diag: &[T],
    b: &[T],
    x0: Vec<T>,
    tol: T,
    max_iters: usize,
) -> LinearOutcome<T> {
    let n = b.len();
    let minv = inverse_diagonal(diag);
    let bnorm = norm(b);
    let mut x = x0;
    if bnorm == T::zero() {
        return LinearOutcome {
            x: vec![T::zero(); n],
            iterations: 0,
            relative_residual: T::zero(),
            converged: true,
        };
    }
    let target = tol * bnorm;
    let mut r = vec![T::zero(); n];
    true_residual(&op, b, &x, &mut r);
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (T::one(), T::one(), T::one());
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    let mut y = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let mut s = vec![T::zero(); n];
    let mut tt = vec![T::zero(); n];
    let mut rnorm = norm(&r);
    let mut iters = 0;
    while rnorm > target && iters < max_iters {
        iters += 1;
        let rho_new = dot(&r_hat, &r);
        if rho_new == T::zero() || !rho_new.is_finite() {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            y[i] = minv[i] * p[i];
        }
        op(&y, &mut v);
        let rv = dot(&r_hat, &v);
        if rv == T::zero() || !rv.is_finite() {
            break;
        }
        alpha = rho_new / rv;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) <= target {
            for i in 0..n {
                x[i] = x[i] + alpha * y[i];
            }
            break;
        }
        for i in 0..n {
            z[i] = minv[i] * s[i];
        }
        op(&z, &mut tt);
        let t2 = dot(&tt, &tt);
        omega = if t2 > T::zero() {
            dot(&tt, &s) / t2
        } else {
            T::zero()
        };
        for i in 0..n {
            x[i] = x[i] + alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * tt[i];
        }
        rnorm = norm(&r);
        rho = rho_new;
        if omega == T::zero() {
            break;
        }
    }
    true_residual(&op, b, &x, &mut r);
    let rel = norm(&r) / bnorm;
    LinearOutcome {
        x,
        iterations: iters,
        relative_residual: rel,
        converged: rel <= tol,
    }
}

/// Restarted GMRES(`restart`) with right diagonal preconditioning.
pub fn gmres<T: Real>(
    op: impl Fn(&[T], &mut [T]),
    diag: &[T],
    b: &[T],
    x0: Vec<T>,
    tol: T,
    restart: usize,
    max_iters: usize,
) -> LinearOutcome<T> {
    let n = b.len();
    let m = restart.max(1);
    let minv = inverse_diagonal(diag);
    let bnorm = norm(b);
    let mut x = x0;
    if bnorm == T::zero() {
        return LinearOutcome {
            x: vec![T::zero(); n],
            iterations: 0,
            relative_residual: T::zero(),
            converged: true,
        };
    }
    let target = tol * bnorm;
    let mut r = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let mut zbuf = vec![T::zero(); n];
    let mut iters = 0;
    loop {
        true_residual(&op, b, &x, &mut r);
        let beta = norm(&r);
        if beta <= target || iters >= max_iters || !beta.is_finite() {
            let rel = beta / bnorm;
            return LinearOutcome {
                x,
                iterations: iters,
                relative_residual: rel,
                converged: rel <= tol,
            };
        }
        let mut basis: Vec<Vec<T>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|&ri| ri / beta).collect());
        // Hessenberg columns, Givens rotations and rotated rhs
        let mut h: Vec<Vec<T>> = Vec::with_capacity(m);
        let mut cs: Vec<T> = Vec::with_capacity(m);
        let mut sn: Vec<T> = Vec::with_capacity(m);
        let mut g = vec![T::zero(); m + 1];
        g[0] = beta;
        let mut used = 0;
        for j in 0..m {
            if iters >= max_iters {
                break;
            }
            iters += 1;
            for i in 0..n {
                zbuf[i] = minv[i] * basis[j][i];
            }
            op(&zbuf, &mut w);
            let mut col = vec![T::zero(); j + 2];
            for (i, q) in basis.iter().enumerate() {
                let hij = dot(&w, q);
                col[i] = hij;
                for (wk, &qk) in w.iter_mut().zip(q) {
                    *wk = *wk - hij * qk;
                }
            }
            let wn = norm(&w);
            col[j + 1] = wn;
            for i in 0..j {
                let a = col[i];
                let bb = col[i + 1];
                col[i] = cs[i] * a + sn[i] * bb;
                col[i + 1] = -sn[i] * a + cs[i] * bb;
            }
            let denom = (col[j] * col[j] + col[j + 1] * col[j + 1]).sqrt();
            let (c, s) = if denom == T::zero() {
                (T::one(), T::zero())
            } else {
                (col[j] / denom, col[j + 1] / denom)
            };
            cs.push(c);
            sn.push(s);
            col[j] = denom;
            col[j + 1] = T::zero();
            g[j + 1] = -s * g[j];
            g[j] = c * g[j];
            h.push(col);
            used = j + 1;
            if g[j + 1].abs() <= target || wn == T::zero() {
                break;
            }
            basis.push(w.iter().map(|&wk| wk / wn).collect());
        }
        // back substitution for the least-squares coefficients
        let mut yk = vec![T::zero(); used];
        for i in (0..used).rev() {
            let mut acc = g[i];
            for (l, hl) in h.iter().enumerate().take(used).skip(i + 1) {
                acc = acc - hl[i] * yk[l];
            }
            yk[i] = if h[i][i] != T::zero() {
                acc / h[i][i]
            } else {
                T::zero()
            };
        }
        for (l, &yl) in yk.iter().enumerate() {
            for i in 0..n {
                x[i] = x[i] + minv[i] * basis[l][i] * yl;
            }
        }
    }
}

/// BiCGStab, falling back to restarted GMRES from the BiCGStab iterate when
/// the former breaks down or stalls.
pub fn solve<T: Real>(
    op: impl Fn(&[T], &mut [T]),
    diag: &[T],
    b: &[T],
    tol: T,
    restart: usize,
    max_iters: usize,
) -> LinearOutcome<T> {
    let first = bicgstab(&op, diag, b, vec![T::zero(); b.len()], tol, max_iters);
    if first.converged {
        return first;
    }
    let start = if first.relative_residual < T::one() && first.x.iter().all(|v| v.is_finite()) {
        first.x.clone()
    } else {
        vec![T::zero(); b.len()]
    };
    let second = gmres(&op, diag, b, start, tol, restart, max_iters);
    let iterations = first.iterations + second.iterations;
    let best = if second.relative_residual <= first.relative_residual
        || !first.relative_residual.is_finite()
    {
        second
    } else {
        first
    };
    LinearOutcome { iterations, ..best }
}

#[cfg(test)]
mod tests {
    use super::*;

    // 1-D periodic convection-diffusion: -x'' + c x' + x, nonsymmetric
    fn op(c: f64) -> impl Fn(&[f64], &mut [f64]) {
        move |x: &[f64], y: &mut [f64]| {
            let n = x.len();
            for i in 0..n {
                let l = x[(i + n - 1) % n];
                let r = x[(i + 1) % n];
                y[i] = -(l - 2.0 * x[i] + r) + c * (r - l) / 2.0 + x[i];
            }
        }
    }

    fn check(out: &LinearOutcome<f64>, b: &[f64], c: f64) {
        assert!(out.converged, "{out:?}");
        let mut y = vec![0.0; b.len()];
        op(c)(&out.x, &mut y);
        let err: f64 = y
            .iter()
            .zip(b)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let bn: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(err <= 1e-10 * bn * 1.01, "{err}");
    }

    #[test]
    fn both_methods_solve_nonsymmetric_system() {
        let n = 200;
        let b: Vec<f64> = (0..n).map(|i| ((i * 7 % 13) as f64 - 6.0) / 6.0).collect();
        let diag = vec![3.0; n];
        let c = 0.7;
        check(
            &bicgstab(op(c), &diag, &b, vec![0.0; n], 1e-10, 2000),
            &b,
            c,
        );
        check(
            &gmres(op(c), &diag, &b, vec![0.0; n], 1e-10, 20, 4000),
            &b,
            c,
        );
        check(&solve(op(c), &diag, &b, 1e-10, 20, 2000), &b, c);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let out = solve(op(0.0), &[3.0; 10], &[0.0; 10], 1e-10, 5, 10);
        assert!(out.converged);
        assert!(out.x.iter().all(|&v| v == 0.0));
    }
}
