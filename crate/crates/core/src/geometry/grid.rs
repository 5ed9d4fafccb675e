use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform periodic grid on `[0, L_1) x ... x [0, L_d)`, `d` in `{2, 3}`.
///
/// Points are numbered row-major: the last axis varies fastest.
#[derive(Debug, Clone)]
pub struct TorusGrid<T> {
    sizes: Vec<usize>,
    lengths: Vec<T>,
    spacing: Vec<T>,
    strides: Vec<usize>,
    /// `neighbors[(idx * dim + axis) * 2 + {0: backward, 1: forward}]`
    neighbors: Vec<usize>,
}

impl<T: PartialEq> PartialEq for TorusGrid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.sizes == other.sizes && self.lengths == other.lengths
    }
}

impl<T: Real> TorusGrid<T> {
    pub fn new(sizes: &[usize], lengths: &[T]) -> Result<Self> {
        let dim = sizes.len();
        if !(2..=3).contains(&dim) {
            return Err(Error::domain(format!(
                "grid dimension {dim} must be 2 or 3"
            )));
        }
        if lengths.len() != dim {
            return Err(Error::Shape(format!(
                "{} lengths for a {dim}-dimensional grid",
                lengths.len()
            )));
        }
        for &s in sizes {
            if s < 8 || s % 2 != 0 {
                return Err(Error::domain(format!(
                    "grid size {s} must be even and >= 8"
                )));
            }
        }
        for &l in lengths {
            if !(l > T::zero() && l.is_finite()) {
                return Err(Error::domain(format!("period length {l} must be positive")));
            }
        }
        let spacing = sizes
            .iter()
            .zip(lengths)
            .map(|(&s, &l)| l / T::from_usize_lossy(s))
            .collect();
        let mut strides = vec![1; dim];
        for a in (0..dim - 1).rev() {
            strides[a] = strides[a + 1] * sizes[a + 1];
        }
        let npoints: usize = sizes.iter().product();
        let mut neighbors = vec![0; npoints * dim * 2];
        for idx in 0..npoints {
            for a in 0..dim {
                let i = (idx / strides[a]) % sizes[a];
                let base = idx - i * strides[a];
                let back = (i + sizes[a] - 1) % sizes[a];
                let fwd = (i + 1) % sizes[a];
                neighbors[(idx * dim + a) * 2] = base + back * strides[a];
                neighbors[(idx * dim + a) * 2 + 1] = base + fwd * strides[a];
            }
        }
        Ok(TorusGrid {
            sizes: sizes.to_vec(),
            lengths: lengths.to_vec(),
            spacing,
            strides,
            neighbors,
        })
    }

    /// Grid on `[0, 2 pi)^d`.
    pub fn periodic_2pi(sizes: &[usize]) -> Result<Self> {
        let l = T::TAU();
        Self::new(sizes, &vec![l; sizes.len()])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    pub fn spacing(&self) -> &[T] {
        &self.spacing
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.neighbors.len() / (2 * self.dim())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn volume(&self) -> T {
        self.lengths.iter().fold(T::one(), |v, &l| v * l)
    }

    pub fn cell_volume(&self) -> T {
        self.spacing.iter().fold(T::one(), |v, &h| v * h)
    }

    /// Largest flat distance between two points: half the diagonal of the
    /// period cell.
    pub fn flat_diameter(&self) -> T {
        let s: T = self.lengths.iter().map(|&l| l * l).sum();
        s.sqrt() * T::lit(0.5)
    }

    /// Neighbor of `idx` one step along `axis`, wrapping periodically.
    #[inline]
    pub fn neighbor(&self, idx: usize, axis: usize, forward: bool) -> usize {
        self.neighbors[(idx * self.dim() + axis) * 2 + forward as usize]
    }

    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        (0..self.dim())
            .map(|a| (idx / self.strides[a]) % self.sizes[a])
            .collect()
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.strides)
            .zip(&self.sizes)
            .map(|((&i, &s), &n)| (i % n) * s)
            .sum()
    }

    /// Physical coordinates of grid point `idx`.
    pub fn coords(&self, idx: usize) -> Vec<T> {
        self.multi_index(idx)
            .into_iter()
            .zip(&self.spacing)
            .map(|(i, &h)| T::from_usize_lossy(i) * h)
            .collect()
    }

    /// Central-difference gradient of `v` at `idx` (entries past `dim` are
    /// zero).
    #[inline]
    pub(crate) fn grad_at(&self, v: &[T], idx: usize) -> [T; 3] {
        let mut g = [T::zero(); 3];
        let half = T::lit(0.5);
        for (a, ga) in g.iter_mut().enumerate().take(self.dim()) {
            let f = v[self.neighbor(idx, a, true)];
            let b = v[self.neighbor(idx, a, false)];
            *ga = (f - b) * half / self.spacing[a];
        }
        g
    }

    /// Three-point second differences on the diagonal, four-point centered
    /// cross stencil off it.
    #[inline]
    pub(crate) fn hess_at(&self, v: &[T], idx: usize) -> crate::symfunc::SymMat<T> {
        let d = self.dim();
        let mut h = crate::symfunc::SymMat::zeros(d);
        let two = T::lit(2.0);
        let quarter = T::lit(0.25);
        let c = v[idx];
        for a in 0..d {
            let pa = self.neighbor(idx, a, true);
            let ma = self.neighbor(idx, a, false);
            let ha = self.spacing[a];
            h.set(a, a, (v[pa] - two * c + v[ma]) / (ha * ha));
            for b in (a + 1)..d {
                let pp = self.neighbor(pa, b, true);
                let pm = self.neighbor(pa, b, false);
                let mp = self.neighbor(ma, b, true);
                let mm = self.neighbor(ma, b, false);
                let hb = self.spacing[b];
                h.set(a, b, (v[pp] - v[pm] - v[mp] + v[mm]) * quarter / (ha * hb));
            }
        }
        h
    }
}
