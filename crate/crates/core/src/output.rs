//! CSV and NDJSON writers. Output bytes depend only on the data written.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::OutputSpec;
use crate::diagnostics::{energy_balance_residuals, oleinik_margins};
use crate::error::OutputError;
use crate::solver::Trajectory;

pub const CSV_HEADER: &str = "t,energy,hamiltonian,mean,tv,max_slope,oleinik_margin,energy_balance_residual";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const SNAPSHOTS_FILE: &str = "snapshots.ndjson";

/// Diagnostics series as CSV, one row per record.
pub fn diagnostics_csv(traj: &Trajectory) -> String {
    let mut s = String::with_capacity(64 * (traj.records.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    let margins = oleinik_margins(&traj.records, traj.model.c(), traj.m_sup);
    let residuals = energy_balance_residuals(&traj.records);
    for ((r, m), e) in traj.records.iter().zip(margins).zip(residuals) {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.t, r.energy, r.hamiltonian, r.mean, r.tv, r.max_slope, m, e
        );
    }
    s
}

#[derive(Serialize)]
struct SnapshotLine<'a> {
    t: f64,
    x: &'a [f64],
    u: &'a [f64],
}

/// One JSON object per stored snapshot: `{"t", "x", "u"}` with `x` the
/// cell centers.
pub fn snapshots_ndjson(traj: &Trajectory) -> String {
    let mut s = String::new();
    let x = traj.grid.centers();
    for snap in &traj.snapshots {
        let line = SnapshotLine {
            t: snap.t,
            x: &x,
            u: snap.u.values(),
        };
        s.push_str(&serde_json::to_string(&line).expect("snapshot serializes"));
        s.push('\n');
    }
    s
}

/// One JSON object per item.
pub fn to_ndjson<T: Serialize>(items: &[T]) -> Result<String, serde_json::Error> {
    let mut s = String::new();
    for item in items {
        s.push_str(&serde_json::to_string(item)?);
        s.push('\n');
    }
    Ok(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), OutputError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| OutputError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Serialize `items` as NDJSON into `path`.
pub fn write_ndjson<T: Serialize>(path: &Path, items: &[T]) -> Result<(), OutputError> {
    let text = to_ndjson(items).map_err(|source| OutputError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    write_file(path, &text)
}

/// Write the sinks selected in `sinks` into `dir`, returning the paths
/// written.
pub fn write_outputs(traj: &Trajectory, dir: &Path, sinks: &OutputSpec) -> Result<Vec<PathBuf>, OutputError> {
    let mut written = Vec::new();
    if sinks.csv {
        let p = dir.join(DIAGNOSTICS_FILE);
        write_file(&p, &diagnostics_csv(traj))?;
        written.push(p);
    }
    if sinks.ndjson {
        let p = dir.join(SNAPSHOTS_FILE);
        write_file(&p, &snapshots_ndjson(traj))?;
        written.push(p);
    }
    Ok(written)
}
