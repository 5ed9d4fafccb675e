use super::problem::Problem;
use crate::error::{Error, Result};
use crate::geometry::ops::augmented_at;
use crate::geometry::GridField;
use crate::scalar::Real;
use crate::symfunc::in_cone;

/// First sample along a segment where admissibility fails.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SegmentFailure<T> {
    pub s: T,
    pub point: usize,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SegmentTest<T> {
    pub samples: usize,
    pub first_failure: Option<SegmentFailure<T>>,
}

impl<T> SegmentTest<T> {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Walks the segment between two positive fields `w0 = e^{u0}`,
/// `w1 = e^{u1}` and checks that `u_s = ln((1-s) w0 + s w1)` is admissible
/// at every grid point for `samples` evenly spaced values of `s` in `[0, 1]`.
pub fn admissible_segment_test<T: Real>(
    w0: &GridField<T>,
    w1: &GridField<T>,
    p: &Problem<T>,
    samples: usize,
) -> Result<SegmentTest<T>> {
    if samples < 2 {
        return Err(Error::domain("segment test needs at least 2 samples"));
    }
    if !w0.same_grid(w1) || **w0.grid() != *p.grid {
        return Err(Error::Shape(
            "segment endpoints and problem grids differ".into(),
        ));
    }
    if !(w0.min() > T::zero() && w1.min() > T::zero()) {
        return Err(Error::domain("segment endpoints must be positive"));
    }
    let cone = p.cone(T::one());
    let denom = T::from_usize_lossy(samples - 1);
    for j in 0..samples {
        let s = T::from_usize_lossy(j) / denom;
        let w = w0.zip_map(w1, |a, b| ((T::one() - s) * a + s * b).ln());
        for i in 0..w.len() {
            let m = augmented_at(&p.grid, w.values(), p.s.at(i), i, p.sign);
            if !in_cone(&m, &cone) {
                return Ok(SegmentTest {
                    samples,
                    first_failure: Some(SegmentFailure { s, point: i }),
                });
            }
        }
    }
    Ok(SegmentTest {
        samples,
        first_failure: None,
    })
}
