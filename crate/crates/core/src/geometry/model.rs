use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Homogeneous model spaces with standard metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    /// Round `S^n`.
    Sphere(usize),
    /// `RP^n` with the quotient of the round metric.
    RealProjective(usize),
    /// `CP^m` with the Fubini-Study metric (real dimension `2m`).
    ComplexProjective(usize),
}

impl ModelKind {
    pub fn real_dim(&self) -> usize {
        match *self {
            ModelKind::Sphere(n) | ModelKind::RealProjective(n) => n,
            ModelKind::ComplexProjective(m) => 2 * m,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ModelKind::Sphere(n) => format!("S^{n}"),
            ModelKind::RealProjective(n) => format!("RP^{n}"),
            ModelKind::ComplexProjective(m) => format!("CP^{m}"),
        }
    }
}

/// Closed-form curvature data of an Einstein model space: `Ric = r g`,
/// scalar curvature `R = n r`, and the Schouten tensor
/// `A = (Ric - R/(2(n-1)) g)/(n-2)`, which is a multiple of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelGeometry<T> {
    pub kind: ModelKind,
    pub ricci_multiple: T,
    pub scalar_curv: T,
    pub diameter: T,
    pub schouten_multiple: T,
}

impl<T: Real> ModelGeometry<T> {
    pub fn new(kind: ModelKind) -> Self {
        let n = T::from_usize_lossy(kind.real_dim());
        let one = T::one();
        let two = T::lit(2.0);
        let (ricci, diameter) = match kind {
            ModelKind::Sphere(_) => (n - one, T::PI()),
            ModelKind::RealProjective(_) => (n - one, T::FRAC_PI_2()),
            ModelKind::ComplexProjective(m) => (two * T::from_usize_lossy(m) + two, T::FRAC_PI_2()),
        };
        let scalar = n * ricci;
        let schouten = (ricci - scalar / (two * (n - one))) / (n - two);
        ModelGeometry {
            kind,
            ricci_multiple: ricci,
            scalar_curv: scalar,
            diameter,
            schouten_multiple: schouten,
        }
    }

    pub fn sphere(n: usize) -> Self {
        Self::new(ModelKind::Sphere(n))
    }

    pub fn real_projective(n: usize) -> Self {
        Self::new(ModelKind::RealProjective(n))
    }

    pub fn complex_projective(m: usize) -> Self {
        Self::new(ModelKind::ComplexProjective(m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchoutenSummary<T> {
    pub schouten_multiple: T,
    pub diameter: T,
    /// `lambda_max(A) D^2`.
    pub invariant: T,
}

/// Schouten multiple, diameter and `lambda_max(A) D^2` of a model space.
/// The Schouten tensor needs real dimension at least 3.
pub fn model_schouten<T: Real>(m: &ModelGeometry<T>) -> Result<SchoutenSummary<T>> {
    let n = m.kind.real_dim();
    if n < 3 {
        return Err(Error::domain(format!(
            "Schouten tensor undefined in real dimension {n} < 3"
        )));
    }
    if !(m.diameter > T::zero()) {
        return Err(Error::domain("diameter must be positive"));
    }
    Ok(SchoutenSummary {
        schouten_multiple: m.schouten_multiple,
        diameter: m.diameter,
        invariant: m.schouten_multiple * m.diameter * m.diameter,
    })
}
