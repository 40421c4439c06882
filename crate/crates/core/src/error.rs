use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FluxError {
    #[error("unknown flux `{0}` (expected `burgers` or `cosine`)")]
    UnknownName(String),
    #[error("flux `{name}` takes {expected} parameter(s), got {got}")]
    Params { name: String, expected: usize, got: usize },
    #[error("cosine flux needs beta in (0, 1), got {0}")]
    BetaOutOfRange(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs at least 8 cells, got {0}")]
    TooFewCells(usize),
    #[error("grid needs x_max > x_min, got [{0}, {1}]")]
    EmptyDomain(f64, f64),
    #[error("field has {got} values but the grid has {expected} cells")]
    LengthMismatch { expected: usize, got: usize },
    #[error("field value at index {0} is not finite")]
    NonFinite(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("regularization length must be positive, got {0}")]
    NonPositiveEll(f64),
    #[error("cut-off parameter must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("truncation level must be positive, got {0}")]
    NonPositiveKappa(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IcError {
    #[error("unknown initial condition `{0}`")]
    UnknownName(String),
    #[error("initial condition `{name}`: {msg}")]
    BadParams { name: String, msg: String },
    #[error("initial condition `{0}` produced non-finite values")]
    NonFinite(String),
}

/// Errors from the time integrators and trajectory post-processing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Ic(#[from] IcError),
    #[error("workspace was built for a different grid or length scale")]
    WorkspaceMismatch,
    #[error("time step must be positive and finite, got {0}")]
    BadTimeStep(f64),
    #[error("characteristic trace left the stored time range at t = {0}")]
    OutsideTimeRange(f64),
    #[error("trajectory holds {0} snapshot(s); at least 2 are needed")]
    TooFewSnapshots(usize),
}

/// Diagnostic checks that cannot be evaluated on the given input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CheckError {
    #[error("energy balance needs a record at every step (record_every = {0})")]
    SparseRecords(usize),
    #[error("energy balance needs a cut-off run (epsilon > 0)")]
    NoCutoff,
    #[error("total-variation bound needs a finite upper convexity bound and finite M")]
    TvBoundUnavailable,
    #[error("scaling study needs at least 3 ladder points, got {0}")]
    TooFewLadderPoints(usize),
    #[error("window [{a}, {b}] x [{t0}, {t1}] does not intersect the trajectory")]
    Window { a: f64, b: f64, t0: f64, t1: f64 },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A single configuration problem, tied to its line when it has one.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ConfigIssue {
    pub line: Option<usize>,
    pub message: String,
}

/// All violations found in a configuration document.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{} configuration error(s):\n{}", issues.len(), issues.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n"))]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep needs at least 2 ladder values, got {0}")]
    TooFewValues(usize),
    #[error("sweep ladder must be strictly monotone")]
    NotMonotone,
    #[error("invalid value {value} for axis `{axis}`")]
    BadValue { axis: &'static str, value: f64 },
    #[error("estimated work {estimate:.3e} cell-steps exceeds the cap {cap:.3e}")]
    ResourceCap { estimate: f64, cap: f64 },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Check(#[from] CheckError),
}
