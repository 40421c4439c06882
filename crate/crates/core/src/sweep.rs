//! Parameter sweeps: run a scenario along a ladder of `ℓ`, `ε` or `n`
//! values and measure distances to a limit solution or between
//! refinements.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::error::{SolverError, SweepError};
use crate::grid::{Field, Grid1D};
use crate::reference::{entropy_solve, ghs_solve};
use crate::solver::{run, RunOutcome, Trajectory};

/// Default cap on estimated cells × steps over a whole sweep.
pub const DEFAULT_MAX_WORK: f64 = 5e10;
pub const WORKERS_ENV: &str = "SOLVER_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Ell,
    Epsilon,
    N,
}

impl Axis {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ell" => Some(Self::Ell),
            "epsilon" => Some(Self::Epsilon),
            "n" => Some(Self::N),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Ell => "ell",
            Self::Epsilon => "epsilon",
            Self::N => "n",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// L¹ distance to the Godunov entropy solution.
    Entropy,
    /// L∞ and Ḣ¹ distances to the generalized Hunter–Saxton solution.
    Ghs,
    /// Distances between consecutive ladder runs (Richardson pairs).
    #[serde(rename = "self")]
    SelfConvergence,
}

impl Comparison {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "entropy" => Some(Self::Entropy),
            "ghs" => Some(Self::Ghs),
            "self" => Some(Self::SelfConvergence),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ScenarioConfig,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub comparison: Comparison,
    /// Measurement interval; defaults to the central half of the domain.
    pub window: Option<(f64, f64)>,
    /// Reference resolution; defaults to 4× the finest ladder `n` for
    /// entropy comparisons and the finest ladder `n` for gHS.
    pub reference_n: Option<usize>,
    pub max_work: f64,
    /// Concurrent ladder runs; `None` uses [`worker_cap`].
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn new(base: ScenarioConfig, axis: Axis, values: Vec<f64>, comparison: Comparison) -> Self {
        Self {
            base,
            axis,
            values,
            comparison,
            window: None,
            reference_n: None,
            max_work: DEFAULT_MAX_WORK,
            workers: None,
        }
    }
}

/// Worker cap from `SOLVER_WORKERS`, else the available parallelism.
pub fn worker_cap() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: Axis,
    pub value: f64,
    pub l1: f64,
    pub linf: f64,
    /// `‖∂ₓ(u - v)‖₂` over the window.
    pub h1: f64,
    /// Observed convergence order against the previous row (self
    /// comparison only).
    pub order: Option<f64>,
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub comparison: Comparison,
    pub window: (f64, f64),
    pub rows: Vec<SweepRow>,
    /// Distances strictly decrease along the ladder.
    pub decreasing: bool,
    pub min_order: Option<f64>,
}

/// The base configuration with one axis value substituted.
pub fn with_axis(base: &ScenarioConfig, axis: Axis, value: f64) -> Result<ScenarioConfig, SweepError> {
    let mut cfg = base.clone();
    let bad = || SweepError::BadValue {
        axis: axis.name(),
        value,
    };
    match axis {
        Axis::Ell => {
            if !(value > 0.0) || !value.is_finite() {
                return Err(bad());
            }
            cfg.ell = value;
        }
        Axis::Epsilon => {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(bad());
            }
            cfg.epsilon = value;
        }
        Axis::N => {
            if value.fract() != 0.0 || !(value >= crate::grid::MIN_CELLS as f64) || value > u32::MAX as f64 {
                return Err(bad());
            }
            cfg.grid = Grid1D::new(base.grid.x_min(), base.grid.x_max(), value as usize).map_err(|_| bad())?;
        }
    }
    Ok(cfg)
}

/// Rough cells × steps estimate from the initial wave speed.
pub fn estimated_work(cfg: &ScenarioConfig) -> f64 {
    let speed = cfg
        .ic
        .sample(&cfg.grid)
        .map(|u| u.values().iter().fold(1.0f64, |a, &v| a.max(cfg.flux.df(v).abs())))
        .unwrap_or(1.0);
    let n = cfg.grid.n() as f64;
    let steps = (cfg.t_final * speed / (cfg.cfl * cfg.grid.dx())).ceil();
    n * steps
}

/// Average (aligned, integer ratio) or interpolate `fine` onto `coarse`.
pub fn restrict(fine: &Field, coarse: &Grid1D) -> Field {
    let fg = fine.grid();
    let ratio = fg.n() / coarse.n();
    let aligned = fg.x_min() == coarse.x_min() && fg.x_max() == coarse.x_max() && ratio * coarse.n() == fg.n();
    if aligned {
        let v = fine.values();
        let vals = (0..coarse.n())
            .map(|i| v[i * ratio..(i + 1) * ratio].iter().sum::<f64>() / ratio as f64)
            .collect();
        Field::new(*coarse, vals).expect("finite averages")
    } else {
        Field::from_fn(*coarse, |x| fine.interpolate(x))
    }
}

/// `(L¹, L∞, Ḣ¹)` distances between `u` and `v` (restricted to `u`'s grid)
/// over the cells in `[a, b]`.
pub fn window_distances(u: &Field, v: &Field, a: f64, b: f64) -> (f64, f64, f64) {
    let g = *u.grid();
    let v = if v.grid() == &g { v.clone() } else { restrict(v, &g) };
    let dx = g.dx();
    let cells = g.cells_in(a, b);
    let (uv, vv) = (u.values(), v.values());
    let mut l1 = 0.0;
    let mut linf = 0.0f64;
    let mut h1 = 0.0;
    for i in cells.clone() {
        let d = uv[i] - vv[i];
        l1 += d.abs();
        linf = linf.max(d.abs());
        if i + 1 < cells.end {
            let dd = (uv[i + 1] - uv[i]) - (vv[i + 1] - vv[i]);
            h1 += dd * dd / dx;
        }
    }
    (dx * l1, linf, h1.sqrt())
}

fn validate(spec: &SweepSpec) -> Result<Vec<ScenarioConfig>, SweepError> {
    if spec.values.len() < 2 {
        return Err(SweepError::TooFewValues(spec.values.len()));
    }
    let inc = spec.values.windows(2).all(|w| w[1] > w[0]);
    let dec = spec.values.windows(2).all(|w| w[1] < w[0]);
    if !inc && !dec {
        return Err(SweepError::NotMonotone);
    }
    spec.base.validate()?;
    spec.values
        .iter()
        .map(|&v| with_axis(&spec.base, spec.axis, v))
        .collect()
}

fn final_field(traj: &Trajectory) -> Result<&Field, SweepError> {
    traj.last()
        .map(|s| &s.u)
        .ok_or(SweepError::Solver(SolverError::TooFewSnapshots(0)))
}

/// Run the ladder (concurrently, up to the worker cap) and compare final
/// states as requested.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport, SweepError> {
    let configs = validate(spec)?;
    let finest_n = configs.iter().map(|c| c.grid.n()).max().unwrap_or(spec.base.grid.n());
    let reference = match spec.comparison {
        Comparison::SelfConvergence => None,
        Comparison::Entropy | Comparison::Ghs => {
            let n = spec.reference_n.unwrap_or(match spec.comparison {
                Comparison::Entropy => 4 * finest_n,
                _ => finest_n,
            });
            let mut cfg = spec.base.clone();
            cfg.grid = Grid1D::new(cfg.grid.x_min(), cfg.grid.x_max(), n).map_err(SolverError::from)?;
            cfg.snapshot_every = 0;
            Some(cfg)
        }
    };

    let work: f64 = configs.iter().chain(reference.as_ref()).map(estimated_work).sum();
    if work > spec.max_work {
        return Err(SweepError::ResourceCap {
            estimate: work,
            cap: spec.max_work,
        });
    }

    let workers = spec.workers.unwrap_or_else(worker_cap).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let comparison = spec.comparison;
    let (runs, reference_traj) = pool.install(|| {
        rayon::join(
            || {
                configs
                    .par_iter()
                    .map(|c| {
                        let mut c = c.clone();
                        c.snapshot_every = 0;
                        run(&c)
                    })
                    .collect::<Result<Vec<_>, _>>()
            },
            || {
                reference.as_ref().map(|cfg| match comparison {
                    Comparison::Entropy => entropy_solve(cfg),
                    _ => ghs_solve(cfg),
                })
            },
        )
    });
    let runs = runs?;
    let reference_traj = reference_traj.transpose()?;

    let g = spec.base.grid;
    let window = spec
        .window
        .unwrap_or((g.x_min() + 0.25 * g.length(), g.x_max() - 0.25 * g.length()));
    let mut rows = Vec::with_capacity(runs.len());
    for (k, traj) in runs.iter().enumerate() {
        let u = final_field(traj)?;
        let (l1, linf, h1) = match (&reference_traj, comparison) {
            (Some(r), _) => window_distances(u, final_field(r)?, window.0, window.1),
            (None, _) => {
                if k + 1 < runs.len() {
                    let next = final_field(&runs[k + 1])?;
                    // compare on the coarser of the two grids
                    if next.len() >= u.len() {
                        window_distances(u, next, window.0, window.1)
                    } else {
                        window_distances(next, u, window.0, window.1)
                    }
                } else {
                    (f64::NAN, f64::NAN, f64::NAN)
                }
            }
        };
        rows.push(SweepRow {
            axis: spec.axis,
            value: spec.values[k],
            l1,
            linf,
            h1,
            order: None,
            outcome: traj.outcome.clone(),
        });
    }
    if comparison == Comparison::SelfConvergence {
        for k in 1..rows.len().saturating_sub(1) {
            let ratio = spec.values[k] / spec.values[k - 1];
            let order = (rows[k - 1].l1 / rows[k].l1).ln() / ratio.abs().ln().abs();
            rows[k].order = Some(order);
        }
    }

    let measured: Vec<&SweepRow> = rows.iter().filter(|r| r.l1.is_finite()).collect();
    let decreasing = measured.windows(2).all(|w| match comparison {
        Comparison::Ghs => w[1].linf < w[0].linf && w[1].h1 < w[0].h1,
        _ => w[1].l1 < w[0].l1,
    });
    let min_order = rows.iter().filter_map(|r| r.order).reduce(f64::min);
    Ok(SweepReport {
        comparison,
        window,
        rows,
        decreasing,
        min_order,
    })
}
