//! Built-in initial conditions.

use serde::{Deserialize, Serialize};

use crate::error::IcError;
use crate::grid::{Field, Grid1D};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum InitialCondition {
    /// `a exp(-(x - x0)²/σ²)`
    Gaussian { a: f64, x0: f64, sigma: f64 },
    /// `a sin(k x)`
    Sine { a: f64, k: f64 },
    /// Smoothed step from `u_left` to `u_right` at `x0` with width `delta`,
    /// made periodic by a `tanh` return ramp of width `ramp_width` centered
    /// on the wrap point.
    RiemannTanh {
        u_left: f64,
        u_right: f64,
        x0: f64,
        delta: f64,
        ramp_width: f64,
    },
    /// Compactly supported C¹ bump `h (1 - s²)²`, `s = (x - x0)/width`,
    /// with height chosen so that `max |u'| = max_slope`.
    BumpSlope { x0: f64, width: f64, max_slope: f64 },
}

/// Parameter names per initial condition, in positional order.
pub fn param_names(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "gaussian" => &["a", "x0", "sigma"],
        "sine" => &["a", "k"],
        "riemann_tanh" => &["u_left", "u_right", "x0", "delta", "ramp_width"],
        "bump_slope" => &["x0", "width", "max_slope"],
        _ => return None,
    })
}

impl InitialCondition {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::Sine { .. } => "sine",
            Self::RiemannTanh { .. } => "riemann_tanh",
            Self::BumpSlope { .. } => "bump_slope",
        }
    }

    /// Build from a name and positional parameters (see [`param_names`]).
    pub fn from_params(name: &str, params: &[f64]) -> Result<Self, IcError> {
        let names = param_names(name).ok_or_else(|| IcError::UnknownName(name.to_string()))?;
        if params.len() != names.len() {
            return Err(IcError::BadParams {
                name: name.to_string(),
                msg: format!(
                    "expected {} parameters ({}), got {}",
                    names.len(),
                    names.join(", "),
                    params.len()
                ),
            });
        }
        let p = params;
        let ic = match name {
            "gaussian" => Self::Gaussian {
                a: p[0],
                x0: p[1],
                sigma: p[2],
            },
            "sine" => Self::Sine { a: p[0], k: p[1] },
            "riemann_tanh" => Self::RiemannTanh {
                u_left: p[0],
                u_right: p[1],
                x0: p[2],
                delta: p[3],
                ramp_width: p[4],
            },
            "bump_slope" => Self::BumpSlope {
                x0: p[0],
                width: p[1],
                max_slope: p[2],
            },
            _ => unreachable!(),
        };
        ic.validate()?;
        Ok(ic)
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Self::Gaussian { a, x0, sigma } => vec![a, x0, sigma],
            Self::Sine { a, k } => vec![a, k],
            Self::RiemannTanh {
                u_left,
                u_right,
                x0,
                delta,
                ramp_width,
            } => vec![u_left, u_right, x0, delta, ramp_width],
            Self::BumpSlope { x0, width, max_slope } => vec![x0, width, max_slope],
        }
    }

    pub fn validate(&self) -> Result<(), IcError> {
        let bad = |msg: &str| {
            Err(IcError::BadParams {
                name: self.name().to_string(),
                msg: msg.to_string(),
            })
        };
        if self.params().iter().any(|v| !v.is_finite()) {
            return Err(IcError::NonFinite(self.name().to_string()));
        }
        match *self {
            Self::Gaussian { sigma, .. } if sigma <= 0.0 => bad("sigma must be positive"),
            Self::RiemannTanh { delta, ramp_width, .. } if delta <= 0.0 || ramp_width <= 0.0 => {
                bad("delta and ramp_width must be positive")
            }
            Self::BumpSlope { width, max_slope, .. } if width <= 0.0 || max_slope < 0.0 => {
                bad("width must be positive and max_slope nonnegative")
            }
            _ => Ok(()),
        }
    }

    /// Height of the `bump_slope` profile: `max |d/dx (1-s²)²| = 8/(3√3 w)`.
    fn bump_height(width: f64, max_slope: f64) -> f64 {
        3.0 * 3f64.sqrt() * width * max_slope / 8.0
    }

    pub fn eval(&self, grid: &Grid1D, x: f64) -> f64 {
        match *self {
            Self::Gaussian { a, x0, sigma } => {
                let s = (x - x0) / sigma;
                a * (-s * s).exp()
            }
            Self::Sine { a, k } => a * (k * x).sin(),
            Self::RiemannTanh {
                u_left,
                u_right,
                x0,
                delta,
                ramp_width,
            } => {
                let step = 0.5 * (1.0 - ((x - x0) / delta).tanh());
                // Return ramp split across the wrap: the two halves meet at
                // value 1/2 with matching slopes.
                let ramp = 0.5 * (1.0 + ((x - grid.x_max()) / ramp_width).tanh())
                    - 0.5 * (1.0 - ((x - grid.x_min()) / ramp_width).tanh());
                u_right + (u_left - u_right) * (step + ramp)
            }
            Self::BumpSlope { x0, width, max_slope } => {
                let s = (x - x0) / width;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    let b = 1.0 - s * s;
                    Self::bump_height(width, max_slope) * b * b
                }
            }
        }
    }

    pub fn sample(&self, grid: &Grid1D) -> Result<Field, IcError> {
        self.validate()?;
        let f = Field::from_fn(*grid, |x| self.eval(grid, x));
        if !f.is_finite() {
            return Err(IcError::NonFinite(self.name().to_string()));
        }
        Ok(f)
    }

    /// Non-fatal concerns about how well the profile fits the periodic box.
    pub fn warnings(&self, grid: &Grid1D) -> Vec<String> {
        let mut w = Vec::new();
        match *self {
            Self::Sine { k, .. } => {
                let periods = k * grid.length() / (2.0 * std::f64::consts::PI);
                if (periods - periods.round()).abs() > 1e-9 {
                    w.push(format!(
                        "sine with k = {k} is not periodic on the grid ({periods:.4} periods)"
                    ));
                }
            }
            Self::Gaussian { x0, sigma, .. } => {
                let gap = (x0 - grid.x_min()).min(grid.x_max() - x0);
                if gap < 6.0 * sigma {
                    w.push("gaussian tail is cut by the periodic wrap".into());
                }
            }
            Self::RiemannTanh {
                x0, delta, ramp_width, ..
            } => {
                let gap = (x0 - grid.x_min()).min(grid.x_max() - x0);
                if gap < 10.0 * delta || gap < 10.0 * ramp_width {
                    w.push("riemann_tanh step sits too close to the return ramp".into());
                }
            }
            Self::BumpSlope { x0, width, .. } => {
                if x0 - width < grid.x_min() || x0 + width > grid.x_max() {
                    w.push("bump_slope support crosses the periodic wrap".into());
                }
            }
        }
        w
    }
}

/// Sample a built-in initial condition by name.
pub fn builtin_ic(name: &str, params: &[f64], grid: &Grid1D) -> Result<Field, IcError> {
    InitialCondition::from_params(name, params)?.sample(grid)
}
