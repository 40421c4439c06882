//! The nonlocal part of the regularized law.
//!
//! `(1 - ℓ²∂²)⁻¹` is discretized with the three-point second difference on
//! the periodic grid and inverted exactly: the cyclic tridiagonal matrix is
//! split into a tridiagonal part plus a rank-one corner correction
//! (Sherman–Morrison), and the tridiagonal part is factored once per
//! `(grid, ℓ)`. A direct convolution against the periodized Green kernel is
//! provided as an independent cross-check.

use crate::cutoff::chi;
use crate::error::{ParamError, SolverError};
use crate::flux::FluxModel;
use crate::grid::{centered_difference, Field, Grid1D};

/// Green kernel of `1 - ℓ²∂²` on the line: `(2ℓ)⁻¹ exp(-|x|/ℓ)`.
pub fn green_kernel(ell: f64, x: f64) -> Result<f64, ParamError> {
    if !(ell > 0.0) {
        return Err(ParamError::NonPositiveEll(ell));
    }
    Ok((-(x.abs()) / ell).exp() / (2.0 * ell))
}

/// Sum of [`green_kernel`] over all periodic images of a box of length
/// `length`: `cosh((L/2 - |x|)/ℓ) / (2ℓ sinh(L/(2ℓ)))` for `|x| ≤ L/2`.
pub fn periodic_green_kernel(ell: f64, length: f64, x: f64) -> f64 {
    let half = 0.5 * length;
    let mut y = x.rem_euclid(length);
    if y > half {
        y = length - y;
    }
    let a = half / ell;
    if a > 350.0 {
        // images are below round-off; avoid cosh/sinh overflow
        return (-y / ell).exp() / (2.0 * ell);
    }
    ((half - y) / ell).cosh() / (2.0 * ell * a.sinh())
}

/// Factored `I - ℓ² D₂` on a periodic grid.
///
/// Immutable once built; solves are reentrant, so one workspace can serve
/// any number of threads.
#[derive(Debug, Clone)]
pub struct HelmholtzWorkspace {
    grid: Grid1D,
    ell: f64,
    /// `ℓ²/dx²`
    ratio: f64,
    /// Thomas elimination of the corner-corrected tridiagonal part:
    /// super-diagonal multipliers and reciprocal pivots.
    upper: Vec<f64>,
    inv_pivot: Vec<f64>,
    /// Solution of the tridiagonal part against the rank-one column.
    z: Vec<f64>,
    corner_ratio: f64,
    inv_denominator: f64,
}

impl HelmholtzWorkspace {
    pub fn new(grid: Grid1D, ell: f64) -> Result<Self, ParamError> {
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(ParamError::NonPositiveEll(ell));
        }
        let n = grid.n();
        let dx = grid.dx();
        let ratio = ell * ell / (dx * dx);
        let diag = 1.0 + 2.0 * ratio;
        let off = -ratio;

        // Corner entries A[0][n-1] = A[n-1][0] = off.
        let gamma = -diag;
        let corner_ratio = off / gamma;
        let mut d = vec![diag; n];
        d[0] = diag - gamma;
        d[n - 1] = diag - off * off / gamma;

        let mut upper = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        let mut pivot = d[0];
        assert!(pivot != 0.0, "singular Helmholtz factorization");
        inv_pivot[0] = 1.0 / pivot;
        for i in 1..n {
            upper[i] = off * inv_pivot[i - 1];
            pivot = d[i] - off * upper[i];
            assert!(pivot != 0.0, "singular Helmholtz factorization");
            inv_pivot[i] = 1.0 / pivot;
        }

        let mut ws = Self {
            grid,
            ell,
            ratio,
            upper,
            inv_pivot,
            z: Vec::new(),
            corner_ratio,
            inv_denominator: 0.0,
        };
        let mut column = vec![0.0; n];
        column[0] = gamma;
        column[n - 1] = off;
        let mut z = vec![0.0; n];
        ws.tridiagonal_solve(&column, &mut z);
        let denom = 1.0 + z[0] + corner_ratio * z[n - 1];
        assert!(denom != 0.0, "singular Helmholtz factorization");
        ws.inv_denominator = 1.0 / denom;
        ws.z = z;
        Ok(ws)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    fn tridiagonal_solve(&self, rhs: &[f64], out: &mut [f64]) {
        let n = rhs.len();
        let off = -self.ratio;
        out[0] = rhs[0] * self.inv_pivot[0];
        for i in 1..n {
            out[i] = (rhs[i] - off * out[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            out[i] -= self.upper[i + 1] * out[i + 1];
        }
    }

    /// Solve `(I - ℓ² D₂) v = rhs` into `out`.
    pub fn solve_into(&self, rhs: &[f64], out: &mut [f64]) {
        let n = self.grid.n();
        debug_assert_eq!(rhs.len(), n);
        self.tridiagonal_solve(rhs, out);
        let fact = (out[0] + self.corner_ratio * out[n - 1]) * self.inv_denominator;
        for (o, z) in out.iter_mut().zip(&self.z) {
            *o -= fact * z;
        }
    }

    /// `(I - ℓ² D₂) v` into `out`.
    pub fn forward_into(&self, v: &[f64], out: &mut [f64]) {
        let n = v.len();
        let r = self.ratio;
        for i in 0..n {
            let left = v[(i + n - 1) % n];
            let right = v[(i + 1) % n];
            out[i] = v[i] - r * ((right - v[i]) - (v[i] - left));
        }
    }

    fn check(&self, field: &Field) -> Result<(), SolverError> {
        if field.grid() != &self.grid {
            return Err(SolverError::WorkspaceMismatch);
        }
        Ok(())
    }

    pub fn forward_apply(&self, v: &Field) -> Result<Field, SolverError> {
        self.check(v)?;
        let mut out = vec![0.0; v.len()];
        self.forward_into(v.values(), &mut out);
        Ok(Field::from_vec_unchecked(self.grid, out))
    }
}

/// `(I - ℓ² D₂)⁻¹ rhs`, with a few steps of iterative refinement.
///
/// For `ℓ ≫ dx` the forward operator has norm about `4ℓ²/dx²`, so rounding
/// `v` to `f64` alone leaves a residual near `4ℓ²/dx² · ulp(v)`; refinement
/// only brings the residual down to that level.
pub fn helmholtz_solve(ws: &HelmholtzWorkspace, rhs: &Field) -> Result<Field, SolverError> {
    ws.check(rhs)?;
    let n = rhs.len();
    let mut out = vec![0.0; n];
    ws.solve_into(rhs.values(), &mut out);
    let (mut res, mut corr) = (vec![0.0; n], vec![0.0; n]);
    let mut best = residual_into(ws, &out, rhs.values(), &mut res);
    for _ in 0..REFINE_STEPS {
        if best == 0.0 {
            break;
        }
        ws.solve_into(&res, &mut corr);
        let trial: Vec<f64> = out.iter().zip(&corr).map(|(o, c)| o + c).collect();
        let mut trial_res = vec![0.0; n];
        let worst = residual_into(ws, &trial, rhs.values(), &mut trial_res);
        if worst >= best {
            break;
        }
        (out, res, best) = (trial, trial_res, worst);
    }
    Ok(Field::from_vec_unchecked(ws.grid, out))
}

const REFINE_STEPS: usize = 3;

/// `rhs - (I - ℓ² D₂) v` into `res`, returning its max norm.
fn residual_into(ws: &HelmholtzWorkspace, v: &[f64], rhs: &[f64], res: &mut [f64]) -> f64 {
    ws.forward_into(v, res);
    let mut worst = 0.0f64;
    for (r, &b) in res.iter_mut().zip(rhs) {
        *r = b - *r;
        worst = worst.max(r.abs());
    }
    worst
}

/// Source of the pressure equation, `f''(u) (q² + χ_ε(q))` with `q` the
/// centered slope; `epsilon = 0` drops the cut-off.
pub(crate) fn pressure_source_into(model: &FluxModel, epsilon: f64, u: &[f64], q: &[f64], out: &mut [f64]) {
    if epsilon > 0.0 {
        for ((o, &ui), &qi) in out.iter_mut().zip(u).zip(q) {
            *o = model.d2f(ui) * (qi * qi + chi(epsilon, qi));
        }
    } else {
        for ((o, &ui), &qi) in out.iter_mut().zip(u).zip(q) {
            *o = model.d2f(ui) * qi * qi;
        }
    }
}

/// `P = ½ (I - ℓ² D₂)⁻¹ [f''(u)(q² + χ_ε(q))]`, nonnegative up to round-off.
pub fn compute_p(ws: &HelmholtzWorkspace, u: &Field, model: &FluxModel, epsilon: f64) -> Result<Field, SolverError> {
    ws.check(u)?;
    if epsilon < 0.0 || !epsilon.is_finite() {
        return Err(ParamError::NonPositiveEpsilon(epsilon).into());
    }
    let n = u.len();
    let mut q = vec![0.0; n];
    centered_difference(u.values(), ws.grid.dx(), &mut q);
    let mut r = vec![0.0; n];
    pressure_source_into(model, epsilon, u.values(), &q, &mut r);
    let mut p = vec![0.0; n];
    ws.solve_into(&r, &mut p);
    p.iter_mut().for_each(|v| *v *= 0.5);
    Ok(Field::from_vec_unchecked(ws.grid, p))
}

/// The Hamiltonian operator `(1 - ℓ²∂²)⁻¹ ∂`: centered derivative, then the
/// Helmholtz solve.
pub fn apply_d(ws: &HelmholtzWorkspace, v: &Field) -> Result<Field, SolverError> {
    ws.check(v)?;
    let n = v.len();
    let mut dv = vec![0.0; n];
    centered_difference(v.values(), ws.grid.dx(), &mut dv);
    let mut out = vec![0.0; n];
    ws.solve_into(&dv, &mut out);
    Ok(Field::from_vec_unchecked(ws.grid, out))
}

/// Antisymmetric primitive `¼ (∫_{x_min}^x R − ∫_x^{x_max} R)`, the pointwise
/// `ℓ → ∞` limit of `−ℓ² ∂ₓ P` for `P = ½ 𝔊 ∗ R` on the line.
pub fn hs_nonlocal(grid: &Grid1D, r: &Field) -> Field {
    let mut out = vec![0.0; grid.n()];
    hs_nonlocal_into(grid.dx(), r.values(), &mut out);
    Field::from_vec_unchecked(*grid, out)
}

pub(crate) fn hs_nonlocal_into(dx: f64, r: &[f64], out: &mut [f64]) {
    let total: f64 = r.iter().sum();
    let mut below = 0.0;
    for (o, &ri) in out.iter_mut().zip(r) {
        // left integral: below + ri/2, right integral: total - below - ri/2
        *o = 0.25 * dx * (2.0 * below + ri - total);
        below += ri;
    }
}

/// Cross-check path for `(1 - ℓ²∂²)⁻¹ v`: quadrature of the periodized
/// Green kernel, with the trapezoid error from the kernel's kink at the
/// origin removed (`−dx²/(12ℓ²) v_i`). O(n²); used only to validate the
/// factored solve.
pub fn green_convolve(grid: &Grid1D, ell: f64, v: &Field) -> Field {
    let n = grid.n();
    let dx = grid.dx();
    let length = grid.length();
    let kernel: Vec<f64> = (0..n)
        .map(|m| periodic_green_kernel(ell, length, m as f64 * dx))
        .collect();
    let vals = v.values();
    let out = (0..n)
        .map(|i| {
            let s: f64 = (0..n).map(|j| kernel[(i + n - j) % n] * vals[j]).sum();
            dx * s - dx * dx / (12.0 * ell * ell) * vals[i]
        })
        .collect();
    Field::from_vec_unchecked(*grid, out)
}
