use serde::{Deserialize, Serialize};

use super::matrix::SymMat;
use super::newton::newton_pass;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orientation of a Garding cone (`Gamma_k^-` is `-Gamma_k^+`), and of the
/// gradient terms in the augmented Hessian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

/// `Gamma_k^{+/-}` at homotopy level `t` (`t = 1` is the pure cone).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec<T> {
    pub k: usize,
    pub sign: Sign,
    pub t: T,
}

/// Number of segment samples in the blended-cone test.
const SEGMENT_SAMPLES: usize = 32;

impl<T: Real> ConeSpec<T> {
    pub fn new(k: usize, sign: Sign, t: T) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("cone order must be >= 1"));
        }
        if !(t >= T::zero() && t <= T::one()) {
            return Err(Error::domain(format!("cone blend t = {t} outside [0, 1]")));
        }
        Ok(ConeSpec { k, sign, t })
    }

    /// `Gamma_k^+`.
    pub fn positive(k: usize) -> Self {
        ConeSpec {
            k,
            sign: Sign::Positive,
            t: T::one(),
        }
    }

    pub fn with_t(self, t: T) -> Self {
        ConeSpec { t, ..self }
    }
}

/// Checks `sigma_j(a) > tol * |a|^j` for `1 <= j <= k` and returns the
/// first failing order.
fn strict_sigmas<T: Real>(a: &SymMat<T>, k: usize) -> Result<[T; super::MAX_DIM + 1]> {
    let pass = newton_pass(a, k);
    let scale = a.frobenius();
    let tol = T::boundary_tol();
    let mut bound = T::one();
    for j in 1..=k {
        bound = bound * scale;
        if !(pass.sigmas[j] > tol * bound) {
            return Err(Error::NotAdmissible {
                point: None,
                order: j,
                value: pass.sigmas[j].as_f64(),
            });
        }
    }
    Ok(pass.sigmas)
}

/// Like [`in_cone`], but reports the failing `sigma_j` on rejection.
pub fn cone_check<T: Real>(a: &SymMat<T>, cone: &ConeSpec<T>) -> Result<()> {
    if cone.k > a.dim() {
        return Err(Error::domain(format!(
            "cone order {} exceeds dimension {}",
            cone.k,
            a.dim()
        )));
    }
    let a = match cone.sign {
        Sign::Positive => *a,
        Sign::Negative => -*a,
    };
    if cone.t >= T::one() {
        return strict_sigmas(&a, cone.k).map(|_| ());
    }

    // Gamma_{k,t}^+: sigma_1 > 0 and the blend stays positive along the
    // segment towards the trace ray.
    let s1 = a.trace();
    let tol = T::boundary_tol() * a.frobenius();
    if !(s1 > tol) {
        return Err(Error::NotAdmissible {
            point: None,
            order: 1,
            value: s1.as_f64(),
        });
    }
    let n = a.dim();
    let ray = SymMat::scaled_identity(n, s1 / T::from_usize_lossy(n));
    let t = cone.t;
    for i in 0..=SEGMENT_SAMPLES {
        let s = T::from_usize_lossy(i) / T::from_usize_lossy(SEGMENT_SAMPLES);
        let b = a * (T::one() - s) + ray * s;
        let mut blend = (T::one() - t) * b.trace();
        if let Ok(sig) = strict_sigmas(&b, cone.k) {
            blend = blend + t * sig[cone.k].powf(T::one() / T::from_usize_lossy(cone.k));
        }
        if !(blend > tol) {
            return Err(Error::NotAdmissible {
                point: None,
                order: cone.k,
                value: blend.as_f64(),
            });
        }
    }
    Ok(())
}

/// Membership of `a` in the cone. Points within the relative boundary
/// tolerance count as outside.
///
/// For `t = 1`, `Gamma_k^+` is tested through `sigma_j > 0` for all
/// `j <= k`. For `t < 1` the blended cone is probed on 33 points of the
/// segment from `a` to `tr(a)/n I`, counting the `sigma_k^{1/k}` term only
/// where it is defined.
pub fn in_cone<T: Real>(a: &SymMat<T>, cone: &ConeSpec<T>) -> bool {
    cone_check(a, cone).is_ok()
}

/// `t sigma_k^{1/k}(a) + (1 - t) sigma_1(a)` on the cone (for the negative
/// cone, evaluated on `-a`).
///
/// For `0 < t < 1` the `sigma_k^{1/k}` term must be defined, so `a` must also
/// lie in `Gamma_k^+` itself.
pub fn sigma_k_root<T: Real>(a: &SymMat<T>, cone: &ConeSpec<T>) -> Result<T> {
    cone_check(a, cone)?;
    let a = match cone.sign {
        Sign::Positive => *a,
        Sign::Negative => -*a,
    };
    let t = cone.t;
    if t == T::zero() {
        return Ok(a.trace());
    }
    let sig = strict_sigmas(&a, cone.k)?;
    let root = sig[cone.k].powf(T::one() / T::from_usize_lossy(cone.k));
    if t >= T::one() {
        Ok(root)
    } else {
        Ok(t * root + (T::one() - t) * sig[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_in_every_cone() {
        for n in 2..=6 {
            for k in 1..=n {
                assert!(in_cone(&SymMat::<f64>::identity(n), &ConeSpec::positive(k)));
                let neg = ConeSpec::new(k, Sign::Negative, 1.0).unwrap();
                assert!(!in_cone(&SymMat::<f64>::identity(n), &neg));
                assert!(in_cone(&-SymMat::<f64>::identity(n), &neg));
            }
        }
    }

    #[test]
    fn cone_examples() {
        let a = SymMat::from_diag(&[1.0, 1.0, -1.0]);
        assert!(!in_cone(&a, &ConeSpec::positive(3)));
        let b = SymMat::from_diag(&[2.0, 2.0, -0.5]);
        assert!(in_cone(&b, &ConeSpec::positive(2)));
        assert!(!in_cone(&b, &ConeSpec::positive(3)));
    }

    #[test]
    fn boundary_counts_as_outside() {
        let a = SymMat::from_diag(&[1.0, 0.0, 0.0]);
        assert!(in_cone(&a, &ConeSpec::positive(1)));
        let err = cone_check(&a, &ConeSpec::positive(2)).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { order: 2, .. }));
        assert!(!in_cone(&SymMat::<f64>::zeros(3), &ConeSpec::positive(1)));
    }

    #[test]
    fn root_examples() {
        let i3 = SymMat::<f64>::identity(3);
        let r = sigma_k_root(&i3, &ConeSpec::positive(2)).unwrap();
        assert!((r - 3f64.sqrt()).abs() < 1e-15);
        let r = sigma_k_root(
            &SymMat::<f64>::scaled_identity(2, 2.0),
            &ConeSpec::positive(2),
        )
        .unwrap();
        assert!((r - 2.0).abs() < 1e-15);
        let d = SymMat::from_diag(&[1.0, 2.0, 3.0]);
        let cone = ConeSpec::positive(2).with_t(0.5);
        let r = sigma_k_root(&d, &cone).unwrap();
        assert!((r - (0.5 * 11f64.sqrt() + 3.0)).abs() < 1e-14);
        assert!((r - 4.6583).abs() < 1e-4);
    }

    #[test]
    fn root_rejects_outside() {
        let a = SymMat::from_diag(&[1.0, -2.0]);
        let err = sigma_k_root(&a, &ConeSpec::positive(2)).unwrap_err();
        assert!(matches!(err, Error::NotAdmissible { order: 1, .. }));
    }

    #[test]
    fn blended_cone_needs_positive_trace() {
        let a = SymMat::from_diag(&[3.0, -1.0]);
        // outside Gamma_2^+ but inside the t < 1 blend
        assert!(!in_cone(&a, &ConeSpec::positive(2)));
        assert!(in_cone(&a, &ConeSpec::positive(2).with_t(0.5)));
        // sigma_k^{1/k} is undefined there, so the blended root is rejected
        assert!(sigma_k_root(&a, &ConeSpec::positive(2).with_t(0.5)).is_err());
        // at t = 0 only the trace matters
        assert_eq!(
            sigma_k_root(&a, &ConeSpec::positive(2).with_t(0.0)).unwrap(),
            2.0
        );
        assert!(!in_cone(
            &SymMat::from_diag(&[1.0, -3.0]),
            &ConeSpec::positive(2).with_t(0.5)
        ));
    }
}
