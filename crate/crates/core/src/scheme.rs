//! Shared finite-volume machinery: limited reconstruction, the Rusanov
//! interface flux and the three-stage SSP Runge–Kutta integrator.

use serde::{Deserialize, Serialize};

use crate::flux::FluxModel;

/// Slope limiter for the piecewise-linear reconstruction feeding the
/// Rusanov flux. `FirstOrder` reconstructs piecewise constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Limiter {
    FirstOrder,
    Minmod,
    #[default]
    VanLeer,
    Mc,
}

impl Limiter {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "first_order" => Some(Self::FirstOrder),
            "minmod" => Some(Self::Minmod),
            "van_leer" => Some(Self::VanLeer),
            "mc" => Some(Self::Mc),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::FirstOrder => "first_order",
            Self::Minmod => "minmod",
            Self::VanLeer => "van_leer",
            Self::Mc => "mc",
        }
    }

    /// Limited slope (per cell, in units of `u`) from backward and forward
    /// differences.
    #[inline]
    pub fn slope(&self, back: f64, fwd: f64) -> f64 {
        match self {
            Self::FirstOrder => 0.0,
            Self::Minmod => minmod(back, fwd),
            Self::VanLeer => {
                let p = back * fwd;
                if p > 0.0 {
                    2.0 * p / (back + fwd)
                } else {
                    0.0
                }
            }
            Self::Mc => {
                if back * fwd <= 0.0 {
                    0.0
                } else {
                    let m = (2.0 * back.abs()).min(2.0 * fwd.abs()).min(0.5 * (back + fwd).abs());
                    m.copysign(back)
                }
            }
        }
    }
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Rusanov (local Lax–Friedrichs) flux between two states.
#[inline]
pub fn rusanov(model: &FluxModel, ul: f64, ur: f64) -> f64 {
    let a = model.df(ul).abs().max(model.df(ur).abs());
    0.5 * (model.f(ul) + model.f(ur)) - 0.5 * a * (ur - ul)
}

/// How the cells beyond the ends of the array are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    Periodic,
    /// Zero-gradient ghost cells.
    Outflow,
}

/// Rusanov fluxes at the `n + 1` interfaces `i - 1/2`, `i = 0..=n`, from a
/// limited piecewise-linear reconstruction. With a periodic closure the
/// first and last entries coincide.
pub fn interface_fluxes(
    model: &FluxModel,
    limiter: Limiter,
    closure: Closure,
    u: &[f64],
    slopes: &mut [f64],
    out: &mut [f64],
) {
    let n = u.len();
    debug_assert_eq!(slopes.len(), n);
    debug_assert_eq!(out.len(), n + 1);
    let at = |i: isize| -> f64 {
        match closure {
            Closure::Periodic => u[i.rem_euclid(n as isize) as usize],
            Closure::Outflow => u[i.clamp(0, n as isize - 1) as usize],
        }
    };
    if limiter == Limiter::FirstOrder {
        slopes.iter_mut().for_each(|s| *s = 0.0);
    } else {
        for (i, s) in slopes.iter_mut().enumerate() {
            let i = i as isize;
            let c = u[i as usize];
            *s = limiter.slope(c - at(i - 1), at(i + 1) - c);
        }
    }
    let slope_at = |i: isize| -> f64 {
        match closure {
            Closure::Periodic => slopes[i.rem_euclid(n as isize) as usize],
            Closure::Outflow => {
                if i < 0 || i >= n as isize {
                    0.0
                } else {
                    slopes[i as usize]
                }
            }
        }
    };
    for (k, o) in out.iter_mut().enumerate() {
        // interface between cells k-1 and k
        let l = k as isize - 1;
        let r = k as isize;
        let ul = at(l) + 0.5 * slope_at(l);
        let ur = at(r) - 0.5 * slope_at(r);
        *o = rusanov(model, ul, ur);
    }
}

/// Reusable buffers for one right-hand-side evaluation.
#[derive(Debug, Clone)]
pub struct Scratch {
    pub q: Vec<f64>,
    pub source: Vec<f64>,
    pub p: Vec<f64>,
    pub slopes: Vec<f64>,
    pub flux: Vec<f64>,
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        Self {
            q: vec![0.0; n],
            source: vec![0.0; n],
            p: vec![0.0; n],
            slopes: vec![0.0; n],
            flux: vec![0.0; n + 1],
        }
    }
}

/// A method-of-lines right-hand side `du/dt = L(u)`.
pub trait SemiDiscrete {
    fn eval(&self, u: &[f64], out: &mut [f64], scratch: &mut Scratch);
}

/// Buffers for [`ssp_rk3_step`].
#[derive(Debug, Clone)]
pub struct RkBuffers {
    pub stage: Vec<f64>,
    pub rate: Vec<f64>,
    pub next: Vec<f64>,
    pub scratch: Scratch,
}

impl RkBuffers {
    pub fn new(n: usize) -> Self {
        Self {
            stage: vec![0.0; n],
            rate: vec![0.0; n],
            next: vec![0.0; n],
            scratch: Scratch::new(n),
        }
    }
}

/// One Shu–Osher SSP-RK3 step from `u` into `bufs.next`, given the
/// already-evaluated first-stage rate `l0 = L(u)`.
pub fn ssp_rk3_step<S: SemiDiscrete + ?Sized>(op: &S, u: &[f64], l0: &[f64], dt: f64, bufs: &mut RkBuffers) {
    let RkBuffers {
        stage,
        rate,
        next,
        scratch,
    } = bufs;
    for ((s, &ui), &li) in stage.iter_mut().zip(u).zip(l0) {
        *s = ui + dt * li;
    }
    op.eval(stage, rate, scratch);
    for (((s, &ui), &si), &ri) in next.iter_mut().zip(u).zip(stage.iter()).zip(rate.iter()) {
        *s = 0.75 * ui + 0.25 * (si + dt * ri);
    }
    op.eval(next, rate, scratch);
    for (((s, &ui), &ni), &ri) in stage.iter_mut().zip(u).zip(next.iter()).zip(rate.iter()) {
        *s = (ui + 2.0 * (ni + dt * ri)) / 3.0;
    }
    std::mem::swap(stage, next);
}
