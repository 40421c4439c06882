//! Uniformly convex flux functions together with the derivatives and
//! antiderivatives the regularized equation and its energy laws need.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::FluxError;

/// Which function of a [`FluxModel`] to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxFn {
    /// `f(u)`
    F,
    /// `f'(u)`
    F1,
    /// `f''(u)`
    F2,
    /// `f'''(u)`
    F3,
    /// Antiderivative of `f`, normalized to vanish at 0.
    Antiderivative,
    /// Energy flux `K` with `K' = u f'(u)`, normalized to vanish at 0.
    EnergyFlux,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FluxKind {
    /// `f(u) = u²/2`
    Burgers,
    /// `f(u) = u²/2 + β cos u`, `0 < β < 1`
    Cosine { beta: f64 },
}

/// A uniformly convex flux with stored convexity bounds `c ≤ f'' ≤ c_upper`.
///
/// Immutable and `Copy`; cheap to hand to every worker of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxModel {
    kind: FluxKind,
    c: f64,
    c_upper: f64,
}

impl FluxModel {
    pub fn burgers() -> Self {
        Self {
            kind: FluxKind::Burgers,
            c: 1.0,
            c_upper: 1.0,
        }
    }

    pub fn cosine(beta: f64) -> Result<Self, FluxError> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(FluxError::BetaOutOfRange(beta));
        }
        Ok(Self {
            kind: FluxKind::Cosine { beta },
            c: 1.0 - beta,
            c_upper: 1.0 + beta,
        })
    }

    /// Look up a built-in flux by name. `cosine` takes `β` as its single
    /// parameter; `burgers` takes none.
    pub fn builtin(name: &str, params: &[f64]) -> Result<Self, FluxError> {
        match name {
            "burgers" => {
                if !params.is_empty() {
                    return Err(FluxError::Params {
                        name: name.to_string(),
                        expected: 0,
                        got: params.len(),
                    });
                }
                Ok(Self::burgers())
            }
            "cosine" => match params {
                [beta] => Self::cosine(*beta),
                _ => Err(FluxError::Params {
                    name: name.to_string(),
                    expected: 1,
                    got: params.len(),
                }),
            },
            other => Err(FluxError::UnknownName(other.to_string())),
        }
    }

    pub fn kind(&self) -> FluxKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FluxKind::Burgers => "burgers",
            FluxKind::Cosine { .. } => "cosine",
        }
    }

    /// Parameters in the order accepted by [`FluxModel::builtin`].
    pub fn params(&self) -> Vec<f64> {
        match self.kind {
            FluxKind::Burgers => Vec::new(),
            FluxKind::Cosine { beta } => vec![beta],
        }
    }

    /// Lower convexity bound `c > 0`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Upper convexity bound; `+∞` when `f''` is unbounded.
    pub fn c_upper(&self) -> f64 {
        self.c_upper
    }

    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        match self.kind {
            FluxKind::Burgers => 0.5 * u * u,
            FluxKind::Cosine { beta } => 0.5 * u * u + beta * u.cos(),
        }
    }

    #[inline]
    pub fn df(&self, u: f64) -> f64 {
        match self.kind {
            FluxKind::Burgers => u,
            FluxKind::Cosine { beta } => u - beta * u.sin(),
        }
    }

    #[inline]
    pub fn d2f(&self, u: f64) -> f64 {
        match self.kind {
            FluxKind::Burgers => 1.0,
            FluxKind::Cosine { beta } => 1.0 - beta * u.cos(),
        }
    }

    #[inline]
    pub fn d3f(&self, u: f64) -> f64 {
        match self.kind {
            FluxKind::Burgers => 0.0,
            FluxKind::Cosine { beta } => beta * u.sin(),
        }
    }

    /// `F` with `F' = f`, `F(0) = 0`.
    #[inline]
    pub fn antiderivative(&self, u: f64) -> f64 {
        match self.kind {
            FluxKind::Burgers => u * u * u / 6.0,
            FluxKind::Cosine { beta } => u * u * u / 6.0 + beta * u.sin(),
        }
    }

    /// `K` with `K' = u f'(u)`, `K(0) = 0`.
    #[inline]
    pub fn energy_flux(&self, u: f64) -> f64 {
        match self.kind {
            FluxKind::Burgers => u * u * u / 3.0,
            // ∫ u sin u = sin u − u cos u
            FluxKind::Cosine { beta } => u * u * u / 3.0 - beta * (u.sin() - u * u.cos()),
        }
    }

    pub fn eval(&self, which: FluxFn, u: f64) -> f64 {
        match which {
            FluxFn::F => self.f(u),
            FluxFn::F1 => self.df(u),
            FluxFn::F2 => self.d2f(u),
            FluxFn::F3 => self.d3f(u),
            FluxFn::Antiderivative => self.antiderivative(u),
            FluxFn::EnergyFlux => self.energy_flux(u),
        }
    }

    /// The unique root of `f'` (the sonic point). `f'` is strictly
    /// increasing, so bisection on a bracket always converges.
    pub fn sonic_point(&self) -> f64 {
        if self.df(0.0) == 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (-1.0, 1.0);
        while self.df(lo) > 0.0 {
            lo *= 2.0;
        }
        while self.df(hi) < 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.df(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl fmt::Display for FluxModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FluxKind::Burgers => write!(f, "burgers"),
            FluxKind::Cosine { beta } => write!(f, "cosine(beta={beta})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn models() -> Vec<FluxModel> {
        vec![
            FluxModel::burgers(),
            FluxModel::cosine(0.3).unwrap(),
            FluxModel::cosine(0.5).unwrap(),
            FluxModel::cosine(0.9).unwrap(),
        ]
    }

    fn samples() -> impl Iterator<Item = f64> {
        (0..=2000).map(|i| -10.0 + 20.0 * i as f64 / 2000.0)
    }

    #[test]
    fn burgers_values() {
        let b = FluxModel::burgers();
        assert_eq!(b.f(1.0), 0.5);
        assert_eq!(b.df(1.0), 1.0);
        assert_eq!(b.d2f(1.0), 1.0);
        assert!((b.energy_flux(2.0) - 8.0 / 3.0).abs() < 1e-15);
        assert!((b.eval(FluxFn::Antiderivative, 1.0) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(b.eval(FluxFn::F3, 5.0), 0.0);
        assert_eq!((b.c(), b.c_upper()), (1.0, 1.0));
    }

    #[test]
    fn cosine_values() {
        let m = FluxModel::cosine(0.5).unwrap();
        assert!((m.d2f(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(FluxModel::cosine(0.3).unwrap().eval(FluxFn::F3, 0.0), 0.0);
        assert_eq!((m.c(), m.c_upper()), (0.5, 1.5));
    }

    #[test]
    fn cosine_bounds_match_brute_force_extremes() {
        let beta = 0.5;
        let m = FluxModel::cosine(beta).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=200_000 {
            let u = -10.0 + 20.0 * i as f64 / 200_000.0;
            let v = 1.0 - beta * u.cos();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!((lo - m.c()).abs() < 1e-8);
        assert!((hi - m.c_upper()).abs() < 1e-8);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            FluxModel::builtin("nope", &[]),
            Err(FluxError::UnknownName(_))
        ));
        assert!(matches!(
            FluxModel::builtin("cosine", &[1.0]),
            Err(FluxError::BetaOutOfRange(_))
        ));
        assert!(matches!(
            FluxModel::builtin("cosine", &[0.0]),
            Err(FluxError::BetaOutOfRange(_))
        ));
        assert!(FluxModel::builtin("cosine", &[]).is_err());
        assert!(FluxModel::builtin("burgers", &[0.1]).is_err());
        assert_eq!(FluxModel::builtin("burgers", &[]).unwrap(), FluxModel::burgers());
    }

    #[test]
    fn derivative_chain_matches_central_differences() {
        let h = 1e-4;
        let tol = 10.0 * h * h;
        for m in models() {
            for u in samples() {
                let cd = |g: &dyn Fn(f64) -> f64| (g(u + h) - g(u - h)) / (2.0 * h);
                let checks = [
                    (cd(&|x| m.f(x)), m.df(u)),
                    (cd(&|x| m.df(x)), m.d2f(u)),
                    (cd(&|x| m.d2f(x)), m.d3f(u)),
                    (cd(&|x| m.antiderivative(x)), m.f(u)),
                    (cd(&|x| m.energy_flux(x)), u * m.df(u)),
                ];
                for (k, (num, exact)) in checks.iter().enumerate() {
                    // relative to magnitude: the cubic antiderivatives reach ~300
                    let scale = 1.0f64.max(exact.abs());
                    assert!(
                        (num - exact).abs() <= tol * scale,
                        "{m} check {k} at u={u}: {num} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn convexity_bounds_hold_on_sample() {
        for m in models() {
            for u in samples() {
                let v = m.d2f(u);
                assert!(v >= m.c() - 1e-15 && v > 0.0);
                assert!(v <= m.c_upper() + 1e-15);
            }
        }
    }

    #[test]
    fn normalization_at_zero() {
        for m in models() {
            assert_eq!(m.antiderivative(0.0), 0.0);
            assert_eq!(m.energy_flux(0.0), 0.0);
        }
    }

    #[test]
    fn sonic_point_is_root_of_derivative() {
        for m in models() {
            let s = m.sonic_point();
            assert!(m.df(s).abs() < 1e-12, "{m}: {s}");
        }
    }
}
