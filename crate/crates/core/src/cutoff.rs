//! Scalar cut-off and truncation functions.
//!
//! `chi` replaces the quadratic Riccati term by a linear one for slopes
//! below `-1/ε`; `s_trunc`/`t_trunc` are the quadratic/linear truncations
//! used when passing to weak limits. Each comes in a checked form and an
//! unchecked form for inner loops.

use crate::error::ParamError;

/// `(q + 1/ε)²` for `q ≤ -1/ε`, else 0. C¹ in `q`.
#[inline]
pub fn chi(epsilon: f64, q: f64) -> f64 {
    debug_assert!(epsilon > 0.0);
    let s = q + 1.0 / epsilon;
    if s <= 0.0 {
        s * s
    } else {
        0.0
    }
}

pub fn chi_checked(epsilon: f64, q: f64) -> Result<f64, ParamError> {
    if !(epsilon > 0.0) {
        return Err(ParamError::NonPositiveEpsilon(epsilon));
    }
    Ok(chi(epsilon, q))
}

/// `S_κ`: `ξ²/2` on `[-κ, κ]`, continued linearly outside.
#[inline]
pub fn s_trunc(kappa: f64, xi: f64) -> f64 {
    if xi <= -kappa {
        -kappa * (xi + 0.5 * kappa)
    } else if xi >= kappa {
        kappa * (xi - 0.5 * kappa)
    } else {
        0.5 * xi * xi
    }
}

/// `T_κ = S_κ'`, i.e. `ξ` clamped to `[-κ, κ]`.
#[inline]
pub fn t_trunc(kappa: f64, xi: f64) -> f64 {
    xi.clamp(-kappa, kappa)
}

pub fn s_trunc_checked(kappa: f64, xi: f64) -> Result<f64, ParamError> {
    if !(kappa > 0.0) {
        return Err(ParamError::NonPositiveKappa(kappa));
    }
    Ok(s_trunc(kappa, xi))
}

pub fn t_trunc_checked(kappa: f64, xi: f64) -> Result<f64, ParamError> {
    if !(kappa > 0.0) {
        return Err(ParamError::NonPositiveKappa(kappa));
    }
    Ok(t_trunc(kappa, xi))
}
