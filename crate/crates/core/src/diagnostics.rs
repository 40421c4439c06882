//! Measured counterparts of the energy, Hamiltonian, slope and scaling
//! bounds, evaluated on states and trajectories.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::cutoff::chi;
use crate::error::{CheckError, SolverError};
use crate::flux::FluxModel;
use crate::grid::{centered_difference, Field, Grid1D};
use crate::helmholtz::{compute_p, HelmholtzWorkspace};
use crate::solver::{run, RunOutcome, State, Trajectory};

/// Relative slack allowed by the bound checks.
pub const CHECK_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `½∫(u² + ℓ² u_x²)`
    pub energy: f64,
    /// `∫[F(u) + ½ℓ² f'(u) u_x²]`
    pub hamiltonian: f64,
    /// `∫u`
    pub mean: f64,
    /// `‖u_x‖₁`
    pub tv: f64,
    pub max_slope: f64,
    /// `1/(c t/2 + 1/M)`
    pub oleinik_bound: f64,
    /// `½ℓ² ∫ f''(u) q χ_ε(q)`, the rate at which the cut-off removes energy.
    pub cutoff_dissipation_rate: f64,
    /// `ℓ² ∫P`
    pub p_mass: f64,
}

/// `1/M` with the convention `1/M = 0` for `M ≤ 0` or `M = ∞`.
pub fn inverse_m(m: f64) -> f64 {
    if m > 0.0 && m.is_finite() {
        1.0 / m
    } else {
        0.0
    }
}

/// `1/(c t/2 + 1/M)`; infinite at `t = 0` when `1/M = 0`.
pub fn oleinik_bound(c: f64, t: f64, m: f64) -> f64 {
    1.0 / (0.5 * c * t + inverse_m(m))
}

/// `‖u₀'‖₁ (c M t/2 + 1)^{2C/c}`, with negative `M` treated as 0.
pub fn tv_bound(tv0: f64, c: f64, c_upper: f64, m: f64, t: f64) -> f64 {
    tv0 * (0.5 * c * m.max(0.0) * t + 1.0).powf(2.0 * c_upper / c)
}

/// Discrete `sup u'`: the largest centered difference.
pub fn slope_sup(u: &Field) -> f64 {
    let mut q = vec![0.0; u.len()];
    centered_difference(u.values(), u.grid().dx(), &mut q);
    q.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Centered slope; on a non-periodic array the end cells use the one-sided
/// difference instead of wrapping.
pub(crate) fn slope_into(u: &[f64], dx: f64, periodic: bool, out: &mut [f64]) {
    if periodic {
        centered_difference(u, dx, out);
        return;
    }
    let n = u.len();
    for i in 0..n {
        let (l, r) = (i.saturating_sub(1), (i + 1).min(n - 1));
        out[i] = (u[r] - u[l]) / ((r - l) as f64 * dx);
    }
}

/// Diagnostics of a state. `m` is `sup u₀'` of the run it belongs to.
pub fn record(
    state: &State,
    model: &FluxModel,
    ws: &HelmholtzWorkspace,
    m: f64,
) -> Result<DiagnosticsRecord, SolverError> {
    if ws.grid() != state.grid() || ws.ell() != state.ell {
        return Err(SolverError::WorkspaceMismatch);
    }
    Ok(record_values(
        state.grid(),
        state.u.values(),
        state.t,
        model,
        state.ell,
        state.epsilon,
        Some(ws),
        m,
        true,
    ))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn record_values(
    grid: &Grid1D,
    u: &[f64],
    t: f64,
    model: &FluxModel,
    ell: f64,
    epsilon: f64,
    ws: Option<&HelmholtzWorkspace>,
    m: f64,
    periodic: bool,
) -> DiagnosticsRecord {
    let n = u.len();
    let dx = grid.dx();
    let ell2 = ell * ell;
    let mut q = vec![0.0; n];
    slope_into(u, dx, periodic, &mut q);

    let mut energy = 0.0;
    let mut hamiltonian = 0.0;
    let mut mean = 0.0;
    let mut rate = 0.0;
    let mut max_slope = f64::NEG_INFINITY;
    let mut tv = 0.0;
    for i in 0..n {
        let (ui, qi) = (u[i], q[i]);
        energy += ui * ui + ell2 * qi * qi;
        hamiltonian += model.antiderivative(ui) + 0.5 * ell2 * model.df(ui) * qi * qi;
        mean += ui;
        if epsilon > 0.0 {
            rate += model.d2f(ui) * qi * chi(epsilon, qi);
        }
        max_slope = max_slope.max(qi);
        if periodic || i + 1 < n {
            tv += (u[(i + 1) % n] - ui).abs();
        }
    }
    let p_mass = match ws {
        Some(ws) => {
            let f = Field::from_vec_unchecked(*grid, u.to_vec());
            // compute_p only fails on mismatched inputs, ruled out by construction
            let p = compute_p(ws, &f, model, epsilon).expect("workspace matches the grid");
            ell2 * dx * p.values().iter().sum::<f64>()
        }
        None => 0.0,
    };
    DiagnosticsRecord {
        t,
        energy: 0.5 * dx * energy,
        hamiltonian: dx * hamiltonian,
        mean: dx * mean,
        tv,
        max_slope,
        oleinik_bound: oleinik_bound(model.c(), t, m),
        cutoff_dissipation_rate: 0.5 * ell2 * dx * rate,
        p_mass,
    }
}

/// Trapezoid integral of the cut-off dissipation rate up to each record.
pub fn integrated_rate(records: &[DiagnosticsRecord]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(records.len());
    for (k, r) in records.iter().enumerate() {
        if k > 0 {
            let p = &records[k - 1];
            acc += 0.5 * (r.t - p.t) * (r.cutoff_dissipation_rate + p.cutoff_dissipation_rate);
        }
        out.push(acc);
    }
    out
}

/// `E(t) - E(0) - ∫₀ᵗ rate`, per record.
pub fn energy_balance_residuals(records: &[DiagnosticsRecord]) -> Vec<f64> {
    let Some(e0) = records.first().map(|r| r.energy) else {
        return Vec::new();
    };
    records
        .iter()
        .zip(integrated_rate(records))
        .map(|(r, i)| r.energy - e0 - i)
        .collect()
}

/// `max_slope · (c t/2 + 1/M)` per record; at most 1 when the bound holds.
pub fn oleinik_margins(records: &[DiagnosticsRecord], c: f64, m: f64) -> Vec<f64> {
    records
        .iter()
        .map(|r| r.max_slope * (0.5 * c * r.t + inverse_m(m)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyBalanceReport {
    pub e0: f64,
    pub delta_e: f64,
    pub integrated_rate: f64,
    /// `|ΔE - ∫rate| / E(0)`
    pub relative_mismatch: f64,
    /// Largest increase of `E` between consecutive records, relative to `E(0)`.
    pub max_relative_increase: f64,
    pub monotone: bool,
    pub pass: bool,
}

/// Compare the energy lost over the run with the integrated cut-off rate.
pub fn check_energy_balance(traj: &Trajectory) -> Result<EnergyBalanceReport, CheckError> {
    if traj.record_every != 1 {
        return Err(CheckError::SparseRecords(traj.record_every));
    }
    if !(traj.epsilon > 0.0) {
        return Err(CheckError::NoCutoff);
    }
    let recs = &traj.records;
    let e0 = recs.first().map_or(0.0, |r| r.energy);
    let e1 = recs.last().map_or(0.0, |r| r.energy);
    let integrated = integrated_rate(recs).last().copied().unwrap_or(0.0);
    let scale = e0.max(f64::MIN_POSITIVE);
    let delta_e = e1 - e0;
    let relative_mismatch = if e0 == 0.0 && delta_e == 0.0 && integrated == 0.0 {
        0.0
    } else {
        (delta_e - integrated).abs() / scale
    };
    let max_increase = recs
        .windows(2)
        .map(|w| w[1].energy - w[0].energy)
        .fold(0.0f64, f64::max);
    let max_relative_increase = if max_increase > 0.0 { max_increase / scale } else { 0.0 };
    let monotone = max_relative_increase <= 1e-12;
    Ok(EnergyBalanceReport {
        e0,
        delta_e,
        integrated_rate: integrated,
        relative_mismatch,
        max_relative_increase,
        monotone,
        pass: monotone && relative_mismatch <= CHECK_SLACK,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Worst `measured / bound` over the checked records.
    pub worst_ratio: f64,
    pub worst_t: f64,
    pub pass: bool,
}

fn worst(ratios: impl Iterator<Item = (f64, f64)>) -> BoundReport {
    let (worst_t, worst_ratio) = ratios.fold(
        (0.0, f64::NEG_INFINITY),
        |acc, (t, r)| if r > acc.1 { (t, r) } else { acc },
    );
    BoundReport {
        worst_ratio,
        worst_t,
        pass: worst_ratio <= 1.0 + CHECK_SLACK,
    }
}

/// Largest `max_x u_x · (c t/2 + 1/M)` over the records.
pub fn check_oleinik(traj: &Trajectory, c: f64, m: f64) -> BoundReport {
    worst(
        traj.records
            .iter()
            .zip(oleinik_margins(&traj.records, c, m))
            .map(|(r, g)| (r.t, g)),
    )
}

/// Largest `‖u_x‖₁ / (‖u₀'‖₁ (c M t/2 + 1)^{2C/c})` over the records.
pub fn check_tv_bound(traj: &Trajectory, c: f64, c_upper: f64, m: f64) -> Result<BoundReport, CheckError> {
    if !c_upper.is_finite() || !m.is_finite() || !(c > 0.0) {
        return Err(CheckError::TvBoundUnavailable);
    }
    let tv0 = traj.records.first().map_or(0.0, |r| r.tv);
    Ok(worst(traj.records.iter().map(|r| {
        let b = tv_bound(tv0, c, c_upper, m, r.t);
        let ratio = if b > 0.0 {
            r.tv / b
        } else if r.tv == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        (r.t, ratio)
    })))
}

/// Absolute tolerance on `|∫u(T) - ∫u₀|`.
pub const MEAN_TOLERANCE: f64 = 1e-9;

/// One line of [`check_suite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// `None` when the check does not apply to this run.
    pub pass: Option<bool>,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, pass: Option<bool>, detail: String) -> Self {
        Self { name, pass, detail }
    }
}

/// Every theorem-level check that applies to a finished trajectory of the
/// regularized equation: completion, mean conservation, the Oleinik and TV
/// bounds, and (with cut-off and per-step records) the energy balance.
pub fn check_suite(traj: &Trajectory) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let cutoff = traj.epsilon > 0.0;
    let (first, last) = match (traj.records.first(), traj.records.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return out,
    };
    out.push(match (&traj.outcome, cutoff) {
        (RunOutcome::Completed, _) => CheckOutcome::new("completion", Some(true), format!("reached t = {}", last.t)),
        (RunOutcome::BlowUp { t, reason }, true) => {
            CheckOutcome::new("completion", Some(false), format!("stopped at t = {t}: {reason}"))
        }
        (RunOutcome::BlowUp { t, reason }, false) => {
            CheckOutcome::new("completion", None, format!("breakdown at t = {t}: {reason}"))
        }
    });

    let drift = last.mean - first.mean;
    out.push(CheckOutcome::new(
        "mean",
        Some(drift.abs() <= MEAN_TOLERANCE),
        format!("drift {drift:.3e} (tolerance {MEAN_TOLERANCE:e})"),
    ));

    let c = traj.model.c();
    let ol = check_oleinik(traj, c, traj.m_sup);
    out.push(CheckOutcome::new(
        "oleinik",
        Some(ol.pass),
        format!("worst ratio {:.4} at t = {:.4}", ol.worst_ratio, ol.worst_t),
    ));

    out.push(match check_tv_bound(traj, c, traj.model.c_upper(), traj.m_sup) {
        Ok(r) => CheckOutcome::new(
            "tv_bound",
            Some(r.pass),
            format!("worst ratio {:.4} at t = {:.4}", r.worst_ratio, r.worst_t),
        ),
        Err(e) => CheckOutcome::new("tv_bound", None, e.to_string()),
    });

    out.push(match check_energy_balance(traj) {
        Ok(r) => CheckOutcome::new(
            "energy",
            Some(r.pass),
            format!(
                "E0 {:.6}, dE {:.6}, integrated rate {:.6}, mismatch {:.2}% of E0, {}",
                r.e0,
                r.delta_e,
                r.integrated_rate,
                100.0 * r.relative_mismatch,
                if r.monotone { "nonincreasing" } else { "increases" }
            ),
        ),
        Err(e) => CheckOutcome::new("energy", None, e.to_string()),
    });
    out
}

/// `(snapshot index, time weight)` pairs and the cells inside the window.
type Quadrature = (Vec<(usize, f64)>, std::ops::Range<usize>);

/// Space-time window `[x_min, x_max] × [t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Window {
    fn error(&self) -> CheckError {
        CheckError::Window {
            a: self.x_min,
            b: self.x_max,
            t0: self.t_min,
            t1: self.t_max,
        }
    }

    /// Trapezoid weights in time for the snapshots inside the window, and the
    /// cell range inside it.
    fn quadrature(&self, traj: &Trajectory) -> Result<Quadrature, CheckError> {
        let idx: Vec<usize> = traj
            .snapshots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.t >= self.t_min && s.t <= self.t_max)
            .map(|(i, _)| i)
            .collect();
        let cells = traj.grid.cells_in(self.x_min, self.x_max);
        if idx.len() < 2 || cells.is_empty() {
            return Err(self.error());
        }
        let mut w = vec![0.0; idx.len()];
        for k in 1..idx.len() {
            let h = traj.snapshots[idx[k]].t - traj.snapshots[idx[k - 1]].t;
            w[k - 1] += 0.5 * h;
            w[k] += 0.5 * h;
        }
        Ok((idx.into_iter().zip(w).collect(), cells))
    }
}

/// `∫∫ (|u_t|^p + |u_x|^p)` over the window, from the stored snapshots.
pub fn measure_slope_lp(traj: &Trajectory, p: f64, window: &Window) -> Result<f64, CheckError> {
    let (weights, cells) = window.quadrature(traj)?;
    let dx = traj.grid.dx();
    let mut total = 0.0;
    let mut q = vec![0.0; traj.grid.n()];
    for (k, wt) in weights {
        let s = &traj.snapshots[k];
        centered_difference(s.u.values(), dx, &mut q);
        let dudt = s.dudt.values();
        let inner: f64 = cells.clone().map(|i| dudt[i].abs().powf(p) + q[i].abs().powf(p)).sum();
        total += wt * dx * inner;
    }
    Ok(total)
}

/// `∫∫ ℓ² P` over the window, recomputing `P` from the stored snapshots.
pub fn p_mass_in_window(traj: &Trajectory, window: &Window) -> Result<f64, CheckError> {
    let (weights, cells) = window.quadrature(traj)?;
    let ws = HelmholtzWorkspace::new(traj.grid, traj.ell).map_err(SolverError::from)?;
    let dx = traj.grid.dx();
    let ell2 = traj.ell * traj.ell;
    let mut total = 0.0;
    for (k, wt) in weights {
        let p = compute_p(&ws, &traj.snapshots[k].u, &traj.model, traj.epsilon)?;
        let inner: f64 = p.values()[cells.clone()].iter().sum();
        total += wt * dx * ell2 * inner;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub ell: f64,
    pub p_mass: f64,
    pub slope_fit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub slope_fit: f64,
    pub decreasing: bool,
    pub pass: bool,
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        let dx = x.ln() - mx;
        (a + dx * (y.ln() - my), b + dx * dx)
    });
    num / den
}

/// Verdict on `(ℓ, ∫∫ℓ²P)` pairs: masses must decrease with `ℓ` and the
/// log-log slope must be at least 0.5.
pub fn scaling_verdict(points: &[(f64, f64)]) -> Result<ScalingReport, CheckError> {
    if points.len() < 3 {
        return Err(CheckError::TooFewLadderPoints(points.len()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let decreasing = sorted.windows(2).all(|w| w[0].1 < w[1].1);
    let slope_fit = log_log_slope(points);
    Ok(ScalingReport {
        rows: points
            .iter()
            .map(|&(ell, p_mass)| ScalingRow { ell, p_mass, slope_fit })
            .collect(),
        slope_fit,
        decreasing,
        pass: decreasing && slope_fit >= 0.5,
    })
}

/// Run each configuration (in parallel) and fit the windowed `ℓ²P` mass
/// against `ℓ`.
pub fn p_mass_scaling(configs: &[ScenarioConfig], window: &Window) -> Result<ScalingReport, CheckError> {
    if configs.len() < 3 {
        return Err(CheckError::TooFewLadderPoints(configs.len()));
    }
    let points = configs
        .par_iter()
        .map(|cfg| {
            let traj = run(cfg)?;
            Ok((cfg.ell, p_mass_in_window(&traj, window)?))
        })
        .collect::<Result<Vec<_>, CheckError>>()?;
    scaling_verdict(&points)
}
