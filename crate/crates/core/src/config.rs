//! Scenario configuration: a line-oriented `key = value` document with
//! `[flux]`, `[ic]`, `[grid]`, `[solver]` and `[output]` sections.
//!
//! ```text
//! flux = cosine; beta = 0.5
//!
//! [ic]
//! name = gaussian
//! a = 1
//! x0 = 0
//! sigma = 0.5
//!
//! [grid]
//! x_min = -10
//! x_max = 10
//! n = 1024
//!
//! [solver]
//! ell = 0.1
//! epsilon = 0.05
//! t_final = 2
//! ```
//!
//! `#` starts a comment and `;` separates assignments on one line. Keys
//! before the first section header may be any key that belongs to exactly
//! one section; `flux` is accepted there (and in `[flux]`) for the flux name.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, ConfigIssue};
use crate::flux::FluxModel;
use crate::grid::{Grid1D, MIN_CELLS};
use crate::ic::{param_names, InitialCondition};
use crate::scheme::Limiter;

pub const DEFAULT_CFL: f64 = 0.4;
pub const DEFAULT_BREAKDOWN_CELLS: f64 = 4.0;
pub const DEFAULT_BREAKDOWN_RELAXATION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub csv: bool,
    pub ndjson: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub flux: FluxModel,
    pub ic: InitialCondition,
    pub grid: Grid1D,
    pub ell: f64,
    /// Cut-off parameter; 0 runs the equation without cut-off.
    pub epsilon: f64,
    pub t_final: f64,
    pub cfl: f64,
    pub record_every: usize,
    /// Store a snapshot every this many steps; 0 keeps only the initial and
    /// final states.
    pub snapshot_every: usize,
    pub limiter: Limiter,
    /// Without cut-off, a slope steeper than `-osc(u₀)/(breakdown_cells·dx)`
    /// counts as breakdown.
    pub breakdown_cells: f64,
    /// Without cut-off, a minimum slope that relaxes by this fraction after
    /// steepening counts as breakdown.
    pub breakdown_relaxation: f64,
    pub output: OutputSpec,
}

impl ScenarioConfig {
    /// A configuration with default solver settings and no output sinks.
    pub fn new(flux: FluxModel, ic: InitialCondition, grid: Grid1D, ell: f64, epsilon: f64, t_final: f64) -> Self {
        Self {
            flux,
            ic,
            grid,
            ell,
            epsilon,
            t_final,
            cfl: DEFAULT_CFL,
            record_every: 1,
            snapshot_every: 0,
            limiter: Limiter::default(),
            breakdown_cells: DEFAULT_BREAKDOWN_CELLS,
            breakdown_relaxation: DEFAULT_BREAKDOWN_RELAXATION,
            output: OutputSpec::default(),
        }
    }

    /// Invariant violations, without line information.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let issues = invariant_issues(self, &BTreeMap::new());
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { issues })
        }
    }

    /// Non-fatal concerns: a box too narrow for the Green kernel's decay plus
    /// the distance travelled by the data, initial data that does not fit
    /// the periodic box, or a large cut-off parameter.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let half = 0.5 * self.grid.length();
        let speed = self
            .ic
            .sample(&self.grid)
            .map(|u| u.values().iter().fold(0.0f64, |a, &v| a.max(self.flux.df(v).abs())))
            .unwrap_or(0.0);
        let need = 10.0 * self.ell + speed * self.t_final;
        if half < need {
            w.push(format!(
                "domain half-width {half} is below 10·ell + max|f'(u0)|·t_final = {need}; periodic images may interact"
            ));
        }
        w.extend(self.ic.warnings(&self.grid));
        if self.epsilon >= 1.0 {
            w.push(format!(
                "epsilon = {} is not small; values below 1 are recommended",
                self.epsilon
            ));
        }
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Flux,
    Ic,
    Grid,
    Solver,
    Output,
}

impl Section {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "flux" => Self::Flux,
            "ic" => Self::Ic,
            "grid" => Self::Grid,
            "solver" => Self::Solver,
            "output" => Self::Output,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Self::Flux => "flux",
            Self::Ic => "ic",
            Self::Grid => "grid",
            Self::Solver => "solver",
            Self::Output => "output",
        }
    }

    fn fixed_keys(self) -> &'static [&'static str] {
        match self {
            Self::Flux => &["name", "beta"],
            Self::Ic => &["name"],
            Self::Grid => &["x_min", "x_max", "n"],
            Self::Solver => &[
                "ell",
                "epsilon",
                "t_final",
                "cfl",
                "record_every",
                "snapshot_every",
                "limiter",
                "breakdown_cells",
                "breakdown_relaxation",
            ],
            Self::Output => &["dir", "csv", "ndjson"],
        }
    }
}

/// Section owning a key written before any header.
fn top_level_section(key: &str) -> Option<(Section, &str)> {
    match key {
        "flux" | "beta" => Some((Section::Flux, if key == "flux" { "name" } else { key })),
        "ic" => Some((Section::Ic, "name")),
        _ => [Section::Grid, Section::Solver, Section::Output]
            .into_iter()
            .find(|s| s.fixed_keys().contains(&key))
            .map(|s| (s, key)),
    }
}

type Entries = BTreeMap<(Section, String), (usize, String)>;

struct Reader<'a> {
    entries: &'a Entries,
    issues: Vec<ConfigIssue>,
}

impl Reader<'_> {
    fn raw(&self, sec: Section, key: &str) -> Option<&(usize, String)> {
        self.entries.get(&(sec, key.to_string()))
    }

    fn issue(&mut self, line: Option<usize>, message: String) {
        self.issues.push(ConfigIssue { line, message });
    }

    fn parsed<T>(&mut self, sec: Section, key: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Option<T> {
        let (line, text) = self.raw(sec, key)?.clone();
        match parse(&text) {
            Some(v) => Some(v),
            None => {
                self.issue(
                    Some(line),
                    format!("[{}] {key}: expected {what}, got `{text}`", sec.name()),
                );
                None
            }
        }
    }

    fn real(&mut self, sec: Section, key: &str) -> Option<f64> {
        self.parsed(sec, key, "a finite real number", |s| {
            s.parse::<f64>().ok().filter(|v| v.is_finite())
        })
    }

    fn count(&mut self, sec: Section, key: &str) -> Option<usize> {
        self.parsed(sec, key, "a nonnegative integer", |s| s.parse::<usize>().ok())
    }

    fn flag(&mut self, sec: Section, key: &str) -> Option<bool> {
        self.parsed(sec, key, "true or false", |s| s.parse::<bool>().ok())
    }

    fn required_real(&mut self, sec: Section, key: &str) -> Option<f64> {
        if self.raw(sec, key).is_none() {
            self.issue(None, format!("[{}] {key} is required", sec.name()));
            return None;
        }
        self.real(sec, key)
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn tokenize(text: &str, issues: &mut Vec<ConfigIssue>) -> Entries {
    let mut entries = Entries::new();
    let mut section: Option<Section> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            match rest.strip_suffix(']').map(str::trim) {
                Some(name) => match Section::parse(name) {
                    Some(s) => section = Some(s),
                    None => {
                        issues.push(ConfigIssue {
                            line: Some(line_no),
                            message: format!("unknown section [{name}]"),
                        });
                        section = None;
                    }
                },
                None => issues.push(ConfigIssue {
                    line: Some(line_no),
                    message: format!("malformed section header `{line}`"),
                }),
            }
            continue;
        }
        for part in line.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let Some((key, value)) = part.split_once('=') else {
                issues.push(ConfigIssue {
                    line: Some(line_no),
                    message: format!("expected `key = value`, got `{part}`"),
                });
                continue;
            };
            let key = key.trim();
            let value = value.trim().to_string();
            let target = match section {
                None => top_level_section(key).map(|(s, k)| (s, k.to_string())),
                Some(Section::Flux) if key == "flux" => Some((Section::Flux, "name".to_string())),
                Some(s) => Some((s, key.to_string())),
            };
            let Some(target) = target else {
                issues.push(ConfigIssue {
                    line: Some(line_no),
                    message: format!("unknown key `{key}` outside any section"),
                });
                continue;
            };
            if let Some((prev, _)) = entries.get(&target) {
                issues.push(ConfigIssue {
                    line: Some(line_no),
                    message: format!(
                        "duplicate key [{}] {} (first set on line {prev})",
                        target.0.name(),
                        target.1
                    ),
                });
                continue;
            }
            entries.insert(target, (line_no, value));
        }
    }
    entries
}

fn line_of(entries: &Entries, sec: Section, key: &str) -> Option<usize> {
    entries.get(&(sec, key.to_string())).map(|(l, _)| *l)
}

fn invariant_issues(cfg: &ScenarioConfig, entries: &Entries) -> Vec<ConfigIssue> {
    let mut out = Vec::new();
    let mut check = |ok: bool, sec: Section, key: &str, msg: String| {
        if !ok {
            out.push(ConfigIssue {
                line: line_of(entries, sec, key),
                message: msg,
            });
        }
    };
    check(
        cfg.ell > 0.0 && cfg.ell.is_finite(),
        Section::Solver,
        "ell",
        format!("ell must be positive, got {}", cfg.ell),
    );
    check(
        cfg.epsilon >= 0.0 && cfg.epsilon.is_finite(),
        Section::Solver,
        "epsilon",
        format!("epsilon must be nonnegative, got {}", cfg.epsilon),
    );
    check(
        cfg.t_final > 0.0 && cfg.t_final.is_finite(),
        Section::Solver,
        "t_final",
        format!("t_final must be positive, got {}", cfg.t_final),
    );
    check(
        cfg.cfl > 0.0 && cfg.cfl <= 1.0,
        Section::Solver,
        "cfl",
        format!("cfl must lie in (0, 1], got {}", cfg.cfl),
    );
    check(
        cfg.record_every >= 1,
        Section::Solver,
        "record_every",
        "record_every must be at least 1".into(),
    );
    check(
        cfg.breakdown_cells > 0.0 && cfg.breakdown_cells.is_finite(),
        Section::Solver,
        "breakdown_cells",
        format!("breakdown_cells must be positive, got {}", cfg.breakdown_cells),
    );
    check(
        cfg.breakdown_relaxation > 0.0 && cfg.breakdown_relaxation < 1.0,
        Section::Solver,
        "breakdown_relaxation",
        format!(
            "breakdown_relaxation must lie in (0, 1), got {}",
            cfg.breakdown_relaxation
        ),
    );
    if let Err(e) = cfg.ic.validate() {
        check(false, Section::Ic, "name", e.to_string());
    }
    out
}

/// Parse and validate a configuration document, reporting every problem
/// found rather than the first.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut issues = Vec::new();
    let entries = tokenize(text, &mut issues);
    let mut r = Reader {
        entries: &entries,
        issues,
    };

    // unknown keys per section
    for ((sec, key), (line, _)) in &entries {
        let known = sec.fixed_keys().contains(&key.as_str())
            || match sec {
                Section::Ic => entries
                    .get(&(Section::Ic, "name".to_string()))
                    .and_then(|(_, n)| param_names(n))
                    .is_some_and(|p| p.contains(&key.as_str())),
                _ => false,
            };
        if !known {
            let line = *line;
            r.issue(Some(line), format!("unknown key `{key}` in [{}]", sec.name()));
        }
    }

    let flux = match r.raw(Section::Flux, "name").cloned() {
        None => {
            r.issue(
                None,
                "flux name is required (`flux = burgers` or `flux = cosine; beta = 0.5`)".into(),
            );
            None
        }
        Some((line, name)) => {
            let params = match name.as_str() {
                "cosine" => match r.raw(Section::Flux, "beta") {
                    Some(_) => r.real(Section::Flux, "beta").map(|b| vec![b]),
                    None => {
                        r.issue(Some(line), "cosine flux needs `beta`".into());
                        None
                    }
                },
                _ => {
                    if let Some((bl, _)) = r.raw(Section::Flux, "beta").cloned() {
                        r.issue(Some(bl), format!("flux `{name}` takes no `beta`"));
                    }
                    Some(Vec::new())
                }
            };
            params.and_then(|p| match FluxModel::builtin(&name, &p) {
                Ok(m) => Some(m),
                Err(e) => {
                    let at = line_of(&entries, Section::Flux, "beta")
                        .filter(|_| name == "cosine")
                        .unwrap_or(line);
                    r.issue(Some(at), e.to_string());
                    None
                }
            })
        }
    };

    let ic = match r.raw(Section::Ic, "name").cloned() {
        None => {
            r.issue(None, "[ic] name is required".into());
            None
        }
        Some((line, name)) => match param_names(&name) {
            None => {
                r.issue(
                    Some(line),
                    format!("unknown initial condition `{name}` (gaussian, sine, riemann_tanh, bump_slope)"),
                );
                None
            }
            Some(keys) => {
                let vals: Vec<Option<f64>> = keys.iter().map(|k| r.required_real(Section::Ic, k)).collect();
                if vals.iter().all(Option::is_some) {
                    let vals: Vec<f64> = vals.into_iter().flatten().collect();
                    match InitialCondition::from_params(&name, &vals) {
                        Ok(ic) => Some(ic),
                        Err(e) => {
                            r.issue(Some(line), e.to_string());
                            None
                        }
                    }
                } else {
                    None
                }
            }
        },
    };

    let x_min = r.required_real(Section::Grid, "x_min");
    let x_max = r.required_real(Section::Grid, "x_max");
    let n = if r.raw(Section::Grid, "n").is_none() {
        r.issue(None, "[grid] n is required".into());
        None
    } else {
        r.count(Section::Grid, "n")
    };
    let grid = match (x_min, x_max, n) {
        (Some(a), Some(b), Some(n)) => match Grid1D::new(a, b, n) {
            Ok(g) => Some(g),
            Err(e) => {
                let key = if n < MIN_CELLS { "n" } else { "x_max" };
                r.issue(line_of(&entries, Section::Grid, key), e.to_string());
                None
            }
        },
        _ => None,
    };

    let ell = r.required_real(Section::Solver, "ell");
    let t_final = r.required_real(Section::Solver, "t_final");
    let epsilon = r.real(Section::Solver, "epsilon").unwrap_or(0.0);
    let cfl = r.real(Section::Solver, "cfl").unwrap_or(DEFAULT_CFL);
    let record_every = r.count(Section::Solver, "record_every").unwrap_or(1);
    let snapshot_every = r.count(Section::Solver, "snapshot_every").unwrap_or(0);
    let breakdown_cells = r
        .real(Section::Solver, "breakdown_cells")
        .unwrap_or(DEFAULT_BREAKDOWN_CELLS);
    let breakdown_relaxation = r
        .real(Section::Solver, "breakdown_relaxation")
        .unwrap_or(DEFAULT_BREAKDOWN_RELAXATION);
    let limiter = r
        .parsed(
            Section::Solver,
            "limiter",
            "one of first_order, minmod, van_leer, mc",
            Limiter::parse,
        )
        .unwrap_or_default();

    let output = OutputSpec {
        dir: r.raw(Section::Output, "dir").map(|(_, d)| PathBuf::from(d)),
        csv: r.flag(Section::Output, "csv").unwrap_or(true),
        ndjson: r.flag(Section::Output, "ndjson").unwrap_or(true),
    };

    let mut issues = r.issues;
    if let (Some(flux), Some(ic), Some(grid), Some(ell), Some(t_final)) = (flux, ic, grid, ell, t_final) {
        let cfg = ScenarioConfig {
            flux,
            ic,
            grid,
            ell,
            epsilon,
            t_final,
            cfl,
            record_every,
            snapshot_every,
            limiter,
            breakdown_cells,
            breakdown_relaxation,
            output,
        };
        issues.extend(invariant_issues(&cfg, &entries));
        if issues.is_empty() {
            return Ok(cfg);
        }
    } else if let (Some(ell), Some(t_final)) = (ell, t_final) {
        // still report solver invariants alongside the other problems
        let probe = ScenarioConfig {
            flux: FluxModel::burgers(),
            ic: InitialCondition::Sine { a: 0.0, k: 1.0 },
            grid: Grid1D::new(0.0, 1.0, MIN_CELLS).expect("valid probe grid"),
            ell,
            epsilon,
            t_final,
            cfl,
            record_every,
            snapshot_every,
            limiter,
            breakdown_cells,
            breakdown_relaxation,
            output,
        };
        issues.extend(invariant_issues(&probe, &entries));
    }
    issues.sort_by_key(|i| i.line.unwrap_or(usize::MAX));
    Err(ConfigError { issues })
}

/// Canonical text form; `parse_config(&render_config(c)) == Ok(c)` for
/// every valid `c`.
pub fn render_config(cfg: &ScenarioConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[flux]");
    let _ = writeln!(s, "name = {}", cfg.flux.name());
    for (k, v) in ["beta"].iter().zip(cfg.flux.params()) {
        let _ = writeln!(s, "{k} = {v}");
    }
    let _ = writeln!(s, "\n[ic]");
    let _ = writeln!(s, "name = {}", cfg.ic.name());
    let names = param_names(cfg.ic.name()).expect("builtin initial condition");
    for (k, v) in names.iter().zip(cfg.ic.params()) {
        let _ = writeln!(s, "{k} = {v}");
    }
    let _ = writeln!(s, "\n[grid]");
    let _ = writeln!(s, "x_min = {}", cfg.grid.x_min());
    let _ = writeln!(s, "x_max = {}", cfg.grid.x_max());
    let _ = writeln!(s, "n = {}", cfg.grid.n());
    let _ = writeln!(s, "\n[solver]");
    let _ = writeln!(s, "ell = {}", cfg.ell);
    let _ = writeln!(s, "epsilon = {}", cfg.epsilon);
    let _ = writeln!(s, "t_final = {}", cfg.t_final);
    let _ = writeln!(s, "cfl = {}", cfg.cfl);
    let _ = writeln!(s, "record_every = {}", cfg.record_every);
    let _ = writeln!(s, "snapshot_every = {}", cfg.snapshot_every);
    let _ = writeln!(s, "limiter = {}", cfg.limiter.name());
    let _ = writeln!(s, "breakdown_cells = {}", cfg.breakdown_cells);
    let _ = writeln!(s, "breakdown_relaxation = {}", cfg.breakdown_relaxation);
    let _ = writeln!(s, "\n[output]");
    if let Some(dir) = &cfg.output.dir {
        let _ = writeln!(s, "dir = {}", dir.display());
    }
    let _ = writeln!(s, "csv = {}", cfg.output.csv);
    let _ = writeln!(s, "ndjson = {}", cfg.output.ndjson);
    s
}
