use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{hessian, GridField, TensorField};
use crate::scalar::Real;
use crate::symfunc::eigen_sym;

/// Largest eigenvalue of `S` over all grid points.
pub fn lambda_max<T: Real>(s: &TensorField<T>) -> T {
    s.mats()
        .iter()
        .map(|m| eigen_sym(m).max())
        .fold(T::neg_infinity(), T::max)
}

/// `2 ln cos(D sqrt(lambda_max(S) / 2))`, the lower bound on `inf u - sup u`
/// for solutions of the determinant equation.
pub fn harnack_gap<T: Real>(s: &TensorField<T>, diameter: T) -> Result<T> {
    if !(diameter >= T::zero()) {
        return Err(Error::domain("diameter must be nonnegative"));
    }
    let lam = lambda_max(s).max(T::zero());
    let product = lam * diameter * diameter;
    let limit = T::PI() * T::PI() / T::lit(2.0);
    if product >= limit {
        return Err(Error::HarnackInfeasible {
            product: product.as_f64(),
        });
    }
    Ok(T::lit(2.0) * (diameter * (lam / T::lit(2.0)).sqrt()).cos().ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnackReport<T> {
    pub feasible: bool,
    pub pass: bool,
    pub gap: Option<T>,
    pub sup_u: T,
    pub inf_u: T,
    /// `inf u - sup u - gap`; positive when the inequality holds.
    pub slack: Option<T>,
    pub note: String,
}

/// Checks `gap + sup u < inf u`.
pub fn verify_harnack<T: Real>(
    u: &GridField<T>,
    s: &TensorField<T>,
    diameter: T,
) -> HarnackReport<T> {
    let (sup_u, inf_u) = (u.max(), u.min());
    match harnack_gap(s, diameter) {
        Ok(gap) => {
            let slack = inf_u - sup_u - gap;
            let pass = slack > T::zero();
            HarnackReport {
                feasible: true,
                pass,
                gap: Some(gap),
                sup_u,
                inf_u,
                slack: Some(slack),
                note: if pass {
                    "ok".into()
                } else {
                    "oscillation exceeds the Harnack gap: not a solution".into()
                },
            }
        }
        Err(e) => HarnackReport {
            feasible: false,
            pass: false,
            gap: None,
            sup_u,
            inf_u,
            slack: None,
            note: e.to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport<T> {
    pub pass: bool,
    /// Smallest eigenvalue of `Hess v + v S / 2` over the grid.
    pub min_eigenvalue: T,
    pub failures: usize,
    pub first_failure: Option<usize>,
}

/// With `v = e^{u/2}`, checks that `Hess v + v S / 2` is positive definite
/// at every grid point.
pub fn verify_v_convexity<T: Real>(
    u: &GridField<T>,
    s: &TensorField<T>,
) -> Result<ConvexityReport<T>> {
    if **u.grid() != **s.grid() {
        return Err(Error::Shape("u and S live on different grids".into()));
    }
    let half = T::lit(0.5);
    let v = u.map(|x| (x * half).exp());
    let hv = hessian(&v);
    let mut report = ConvexityReport {
        pass: true,
        min_eigenvalue: T::infinity(),
        failures: 0,
        first_failure: None,
    };
    for i in 0..u.len() {
        let m = *hv.at(i) + *s.at(i) * (v.values()[i] * half);
        let e = eigen_sym(&m).min();
        report.min_eigenvalue = report.min_eigenvalue.min(e);
        if !(e > T::zero()) {
            report.pass = false;
            report.failures += 1;
            report.first_failure.get_or_insert(i);
        }
    }
    Ok(report)
}

/// Integrates `v'' = -alpha v + g(t)` from `v(0) = m`, `v'(0) = 0` with
/// classical RK4 over `[0, t_end]` and returns `(t, v(t), m cos(sqrt(alpha) t))`
/// at every step. For `g > 0` the first profile stays above the second while
/// `sqrt(alpha) t < pi/2`.
pub fn comparison_profile<T: Real>(
    alpha: T,
    m: T,
    g: impl Fn(T) -> T,
    t_end: T,
    steps: usize,
) -> Vec<(T, T, T)> {
    let h = t_end / T::from_usize_lossy(steps.max(1));
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    let f = |t: T, y: (T, T)| (y.1, -alpha * y.0 + g(t));
    let mut y = (m, T::zero());
    let mut out = Vec::with_capacity(steps + 1);
    let w = |t: T| m * (alpha.sqrt() * t).cos();
    out.push((T::zero(), m, m));
    for j in 0..steps {
        let t = h * T::from_usize_lossy(j);
        let k1 = f(t, y);
        let k2 = f(t + h / two, (y.0 + h / two * k1.0, y.1 + h / two * k1.1));
        let k3 = f(t + h / two, (y.0 + h / two * k2.0, y.1 + h / two * k2.1));
        let k4 = f(t + h, (y.0 + h * k3.0, y.1 + h * k3.1));
        y = (
            y.0 + h / six * (k1.0 + two * k2.0 + two * k3.0 + k4.0),
            y.1 + h / six * (k1.1 + two * k2.1 + two * k3.1 + k4.1),
        );
        let tn = t + h;
        out.push((tn, y.0, w(tn)));
    }
    out
}
