//! Uniform periodic grid and cell-sampled fields.
//!
//! A periodic box stands in for the real line. Data whose derivative is
//! compactly supported is placed in a box wide enough that the exponential
//! Green kernel, decaying like `exp(-d/ℓ)`, does not feel the wrap over the
//! simulated time.

use serde::{Deserialize, Serialize};

use crate::error::GridError;

/// Minimum number of cells accepted by [`Grid1D::new`].
pub const MIN_CELLS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, GridError> {
        if n < MIN_CELLS {
            return Err(GridError::TooFewCells(n));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(GridError::EmptyDomain(x_min, x_max));
        }
        Ok(Self { x_min, x_max, n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    #[inline]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    /// Always true; kept so callers can assert on it.
    pub fn periodic(&self) -> bool {
        true
    }

    /// Cell center `x_min + (i + 1/2) dx`.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Map any real coordinate into `[x_min, x_max)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let l = self.length();
        let mut y = (x - self.x_min).rem_euclid(l) + self.x_min;
        if y >= self.x_max {
            y -= l;
        }
        y
    }

    /// Half-open index range of cells whose centers lie in `[a, b]`.
    pub fn cells_in(&self, a: f64, b: f64) -> std::ops::Range<usize> {
        let dx = self.dx();
        let lo = ((a - self.x_min) / dx - 0.5).ceil().max(0.0) as usize;
        let hi = (((b - self.x_min) / dx - 0.5).floor() + 1.0).clamp(0.0, self.n as f64) as usize;
        lo.min(hi)..hi
    }
}

/// Real-valued samples at the cell centers of a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid1D,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.n() {
            return Err(GridError::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    /// Skip the finiteness scan; for values the caller has just computed.
    pub(crate) fn from_vec_unchecked(grid: Grid1D, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid1D, a: f64) -> Self {
        Self {
            grid,
            values: vec![a; grid.n()],
        }
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n()).map(|i| f(grid.x(i))).collect();
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        debug_assert_eq!(self.grid, other.grid);
        Field {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Discrete L² inner product `dx Σ a_i b_i`.
    pub fn dot(&self, other: &Field) -> f64 {
        self.grid.dx() * self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Linear interpolation at an arbitrary (periodically wrapped) point.
    pub fn interpolate(&self, x: f64) -> f64 {
        let g = &self.grid;
        let s = (g.wrap(x) - g.x_min()) / g.dx() - 0.5;
        let i0 = s.floor();
        let w = s - i0;
        let n = g.n() as isize;
        let i = (i0 as isize).rem_euclid(n) as usize;
        let j = (i + 1) % g.n();
        (1.0 - w) * self.values[i] + w * self.values[j]
    }
}

/// Periodic centered difference `(v[i+1] - v[i-1]) / (2 dx)` into `out`.
pub fn centered_difference(v: &[f64], dx: f64, out: &mut [f64]) {
    let n = v.len();
    let inv = 0.5 / dx;
    out[0] = (v[1] - v[n - 1]) * inv;
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - v[i - 1]) * inv;
    }
    out[n - 1] = (v[0] - v[n - 2]) * inv;
}

/// Second-order centered derivative with periodic wrap.
pub fn derivative(field: &Field) -> Field {
    let mut out = vec![0.0; field.len()];
    centered_difference(field.values(), field.grid.dx(), &mut out);
    Field::from_vec_unchecked(field.grid, out)
}

/// Midpoint rule `dx Σ v_i`.
pub fn integrate(field: &Field) -> f64 {
    field.grid.dx() * field.values.iter().sum::<f64>()
}

/// `Σ |v[i+1] - v[i]|` with periodic wrap, the discrete `‖v_x‖_{L¹}`.
pub fn total_variation(field: &Field) -> f64 {
    let v = field.values();
    let n = v.len();
    (0..n).map(|i| (v[(i + 1) % n] - v[i]).abs()).sum()
}

/// Exponent selector for [`norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    L1,
    L2,
    Inf,
    /// General `p ≥ 1`.
    Lp(f64),
}

/// `(dx Σ |v|^p)^{1/p}`, or `max |v|` for [`NormKind::Inf`].
pub fn norm(field: &Field, p: NormKind) -> f64 {
    let dx = field.grid.dx();
    let v = field.values();
    match p {
        NormKind::L1 => dx * v.iter().map(|x| x.abs()).sum::<f64>(),
        NormKind::L2 => (dx * v.iter().map(|x| x * x).sum::<f64>()).sqrt(),
        NormKind::Inf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        NormKind::Lp(p) => {
            assert!(p >= 1.0, "norm exponent must be >= 1, got {p}");
            (dx * v.iter().map(|x| x.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
        }
    }
}
