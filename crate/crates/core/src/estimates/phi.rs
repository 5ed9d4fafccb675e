use serde::{Deserialize, Serialize};

use super::bounds::C0Bounds;
use crate::scalar::Real;

/// Which of the two gradient-estimate auxiliary functions to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiMode {
    /// `phi(s) = c1 (c2 - s)^p` with `phi' < 0` and `phi'' - phi'^2 + phi' > 0`.
    Positive,
    /// `phi(s) = c1 (c2 + s)^p` with `phi' > 0` and `phi'' - phi'^2 - phi' > 0`.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiConstants<T> {
    pub c1: T,
    pub c2: T,
    pub p: T,
    pub mode: PhiMode,
}

/// Outcome of checking both inequalities on a uniform sample of the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiCheck<T> {
    pub samples: usize,
    pub failures: usize,
    /// Smallest `-phi'` (positive mode) or `phi'` (negative mode) seen.
    pub min_slope: T,
    /// Smallest value of the second-order expression seen.
    pub min_curvature: T,
}

impl<T: Real> PhiConstants<T> {
    fn base(&self, s: T) -> T {
        match self.mode {
            PhiMode::Positive => self.c2 - s,
            PhiMode::Negative => self.c2 + s,
        }
    }

    pub fn phi(&self, s: T) -> T {
        self.c1 * self.base(s).powf(self.p)
    }

    pub fn d1(&self, s: T) -> T {
        let d = self.c1 * self.p * self.base(s).powf(self.p - T::one());
        match self.mode {
            PhiMode::Positive => -d,
            PhiMode::Negative => d,
        }
    }

    pub fn d2(&self, s: T) -> T {
        self.c1 * self.p * (self.p - T::one()) * self.base(s).powf(self.p - T::lit(2.0))
    }

    /// `phi'' - phi'^2 + phi'` (positive mode) or `phi'' - phi'^2 - phi'`
    /// (negative mode).
    pub fn curvature(&self, s: T) -> T {
        let d1 = self.d1(s);
        match self.mode {
            PhiMode::Positive => self.d2(s) - d1 * d1 + d1,
            PhiMode::Negative => self.d2(s) - d1 * d1 - d1,
        }
    }

    /// Evaluates both inequalities at `samples` equispaced points of
    /// `[lower, upper]`, endpoints included.
    pub fn verify(&self, b: &C0Bounds<T>, samples: usize) -> PhiCheck<T> {
        let mut check = PhiCheck {
            samples,
            failures: 0,
            min_slope: T::infinity(),
            min_curvature: T::infinity(),
        };
        let denom = T::from_usize_lossy(samples.max(2) - 1);
        for j in 0..samples {
            let s = b.lower + (b.upper - b.lower) * T::from_usize_lossy(j) / denom;
            let slope = match self.mode {
                PhiMode::Positive => -self.d1(s),
                PhiMode::Negative => self.d1(s),
            };
            let curv = self.curvature(s);
            check.min_slope = check.min_slope.min(slope);
            check.min_curvature = check.min_curvature.min(curv);
            if !(slope > T::zero() && curv > T::zero()) {
                check.failures += 1;
            }
        }
        check
    }
}

/// Sample count used when checking constructed constants.
const VERIFY_SAMPLES: usize = 10_000;

/// Builds `phi` on `[b.lower, b.upper]`: the smallest integer `p >= 2` with
/// `upper < lower + p - 1 - 1/p`, `c2` the midpoint of
/// `(upper, lower + p - 1 - 1/p)` and `c1 = 1 / (p^2 max (c2 - s)^p)`.
/// The result is checked on a dense sample; should rounding defeat a
/// razor-thin interval, the next `p` is used.
pub fn phi_constants<T: Real>(b: &C0Bounds<T>, mode: PhiMode) -> PhiConstants<T> {
    // negative mode is the positive construction on the mirrored interval
    let (lo, hi) = match mode {
        PhiMode::Positive => (b.lower, b.upper),
        PhiMode::Negative => (-b.upper, -b.lower),
    };
    let width = hi - lo;
    let mut p = 2usize;
    loop {
        let pf = T::from_usize_lossy(p);
        let top = lo + pf - T::one() - T::one() / pf;
        if top > hi {
            let c2 = (hi + top) / T::lit(2.0);
            // (c2 - s)^p is largest at the left end of the interval
            let c1 = T::one() / (pf * pf * (c2 - lo).powf(pf));
            let c = PhiConstants {
                c1,
                c2,
                p: pf,
                mode,
            };
            let tight = top - hi <= T::lit(1e-9) * (T::one() + width);
            if !tight && c.verify(b, VERIFY_SAMPLES).failures == 0 {
                return c;
            }
        }
        p += 1;
    }
}
