//! Reference solvers for the two limits of the regularization: the entropy
//! solution of `u_t + f(u)_x = 0` and the generalized Hunter–Saxton equation
//! `[u_t + f(u)_x]_x = ½ f''(u) u_x²`.

use crate::config::ScenarioConfig;
use crate::diagnostics::slope_into;
use crate::error::SolverError;
use crate::flux::FluxModel;
use crate::helmholtz::hs_nonlocal_into;
use crate::scheme::{interface_fluxes, Closure, Limiter, RkBuffers, Scratch, SemiDiscrete};
use crate::solver::{integrate, ssp_advance, LoopSpec, Trajectory};

/// Largest CFL number the forward-Euler Godunov scheme accepts.
pub const GODUNOV_MAX_CFL: f64 = 0.5;

/// Exact-Riemann (Godunov) flux for a convex `f`: the minimum of `f` over
/// `[uL, uR]` when `uL ≤ uR`, else the maximum over `[uR, uL]`.
pub fn godunov_flux(model: &FluxModel, ul: f64, ur: f64) -> f64 {
    if ul <= ur {
        model.f(model.sonic_point().clamp(ul, ur))
    } else {
        model.f(ul).max(model.f(ur))
    }
}

/// First-order Godunov discretization of the conservation law on a periodic
/// grid.
pub struct GodunovLaw<'a> {
    pub model: &'a FluxModel,
    pub dx: f64,
    sonic: f64,
}

impl<'a> GodunovLaw<'a> {
    pub fn new(model: &'a FluxModel, dx: f64) -> Self {
        Self {
            model,
            dx,
            sonic: model.sonic_point(),
        }
    }

    #[inline]
    fn flux(&self, ul: f64, ur: f64) -> f64 {
        if ul <= ur {
            self.model.f(self.sonic.clamp(ul, ur))
        } else {
            self.model.f(ul).max(self.model.f(ur))
        }
    }
}

impl SemiDiscrete for GodunovLaw<'_> {
    fn eval(&self, u: &[f64], out: &mut [f64], s: &mut Scratch) {
        let n = u.len();
        for k in 0..=n {
            s.flux[k] = self.flux(u[(k + n - 1) % n], u[k % n]);
        }
        for i in 0..n {
            out[i] = -(s.flux[i + 1] - s.flux[i]) / self.dx;
        }
    }
}

fn euler_advance<S: SemiDiscrete>(_: &S, u: &[f64], rate: &[f64], dt: f64, bufs: &mut RkBuffers) {
    for ((o, &ui), &ri) in bufs.next.iter_mut().zip(u).zip(rate) {
        *o = ui + dt * ri;
    }
}

fn initial_field(config: &ScenarioConfig) -> Result<crate::grid::Field, SolverError> {
    Ok(config.ic.sample(&config.grid)?)
}

/// Entropy solution by the first-order Godunov scheme with forward Euler.
/// `ℓ` and `ε` are ignored; the CFL number is capped at
/// [`GODUNOV_MAX_CFL`]. Records carry `ℓ = 0`.
pub fn entropy_solve(config: &ScenarioConfig) -> Result<Trajectory, SolverError> {
    let u0 = initial_field(config)?;
    let op = GodunovLaw::new(&config.flux, config.grid.dx());
    let spec = LoopSpec {
        model: &config.flux,
        ws: None,
        ell: 0.0,
        epsilon: 0.0,
        t_final: config.t_final,
        cfl: config.cfl.min(GODUNOV_MAX_CFL),
        record_every: config.record_every,
        snapshot_every: config.snapshot_every,
        breakdown: None,
        periodic_slope: true,
    };
    Ok(integrate(&op, u0, &spec, euler_advance))
}

/// Semi-discrete generalized Hunter–Saxton operator on an open interval:
/// Rusanov transport with zero-gradient ends plus the antisymmetric
/// primitive of `f''(u) u_x²`.
pub struct GhsLaw<'a> {
    pub model: &'a FluxModel,
    pub dx: f64,
    pub limiter: Limiter,
}

impl SemiDiscrete for GhsLaw<'_> {
    fn eval(&self, u: &[f64], out: &mut [f64], s: &mut Scratch) {
        let n = u.len();
        slope_into(u, self.dx, false, &mut s.q);
        for ((r, &ui), &qi) in s.source.iter_mut().zip(u).zip(&s.q) {
            *r = self.model.d2f(ui) * qi * qi;
        }
        hs_nonlocal_into(self.dx, &s.source, &mut s.p);
        interface_fluxes(
            self.model,
            self.limiter,
            Closure::Outflow,
            u,
            &mut s.slopes,
            &mut s.flux,
        );
        for i in 0..n {
            out[i] = -(s.flux[i + 1] - s.flux[i]) / self.dx + s.p[i];
        }
    }
}

/// Generalized Hunter–Saxton solution with SSP-RK3 in time. The domain is
/// treated as an open interval (zero-gradient ends), since the
/// antisymmetric gauge makes `u` differ at the two ends. Stops only on
/// non-finite values or slopes beyond the abort threshold. Records carry
/// `ℓ = 0`.
pub fn ghs_solve(config: &ScenarioConfig) -> Result<Trajectory, SolverError> {
    let u0 = initial_field(config)?;
    let op = GhsLaw {
        model: &config.flux,
        dx: config.grid.dx(),
        limiter: config.limiter,
    };
    let spec = LoopSpec {
        model: &config.flux,
        ws: None,
        ell: 0.0,
        epsilon: 0.0,
        t_final: config.t_final,
        cfl: config.cfl,
        record_every: config.record_every,
        snapshot_every: config.snapshot_every,
        breakdown: None,
        periodic_slope: false,
    };
    Ok(integrate(&op, u0, &spec, ssp_advance))
}

/// `½ ∫ u_x²` with one-sided differences at the ends, the energy that the
/// generalized Hunter–Saxton flow dissipates.
pub fn slope_energy(u: &crate::grid::Field) -> f64 {
    let dx = u.grid().dx();
    let mut q = vec![0.0; u.len()];
    slope_into(u.values(), dx, false, &mut q);
    0.5 * dx * q.iter().map(|v| v * v).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(model: &FluxModel, ul: f64, ur: f64) -> f64 {
        let (a, b) = (ul.min(ur), ul.max(ur));
        let vals = (0..=100_000).map(|k| model.f(a + (b - a) * k as f64 / 100_000.0));
        if ul <= ur {
            vals.fold(f64::INFINITY, f64::min)
        } else {
            vals.fold(f64::NEG_INFINITY, f64::max)
        }
    }

    #[test]
    fn godunov_examples() {
        let b = FluxModel::burgers();
        assert_eq!(godunov_flux(&b, 0.3, 0.3), b.f(0.3));
        assert_eq!(godunov_flux(&b, 2.0, 0.0), 2.0);
        assert_eq!(godunov_flux(&b, -1.0, 1.0), 0.0);
        assert!((godunov_flux(&b, 2.0, 0.0) - brute(&b, 2.0, 0.0)).abs() < 1e-12);
        assert!((godunov_flux(&b, -1.0, 1.0) - brute(&b, -1.0, 1.0)).abs() < 1e-9);
    }

    #[test]
    fn godunov_matches_brute_force_for_cosine() {
        let m = FluxModel::cosine(0.6).unwrap();
        for &(l, r) in &[(-1.0, 2.0), (2.0, -1.0), (0.1, 0.5), (3.0, 1.0), (-4.0, -3.0)] {
            assert!((godunov_flux(&m, l, r) - brute(&m, l, r)).abs() < 1e-9, "{l} {r}");
        }
    }

    #[test]
    fn godunov_flux_is_monotone() {
        let m = FluxModel::cosine(0.3).unwrap();
        let pts: Vec<f64> = (0..41).map(|k| -2.0 + 0.1 * k as f64).collect();
        for &a in &pts {
            for w in pts.windows(2) {
                assert!(godunov_flux(&m, w[0], a) <= godunov_flux(&m, w[1], a) + 1e-15);
                assert!(godunov_flux(&m, a, w[0]) >= godunov_flux(&m, a, w[1]) - 1e-15);
            }
        }
    }
}
