//! Plain-text field dumps and timing records.
//!
//! A field dump is two header lines followed by one value per line, axis 0
//! varying fastest:
//!
//! ```text
//! # dim 2
//! # origin -1 -1 spacing 0.0125 0.0125 points 161 161
//! -2e0
//! ...
//! ```
//!
//! Values are written in Rust's shortest round-trip form, so a reload is
//! bit-exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use sgsweep_core::{CartesianGrid, ScalarField};

use crate::run::RunReport;
use crate::CliError;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn join(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(" ")
}

pub fn write_field<W: Write>(field: &ScalarField, mut out: W) -> std::io::Result<()> {
    let g = field.grid();
    writeln!(out, "# dim {}", g.dim())?;
    writeln!(
        out,
        "# origin {} spacing {} points {}",
        join(g.origin().iter().map(|v| format!("{v:e}"))),
        join(g.spacing().iter().map(|v| format!("{v:e}"))),
        join(g.shape().iter().map(|v| v.to_string())),
    )?;
    for v in field.values() {
        writeln!(out, "{v:e}")?;
    }
    out.flush()
}

pub fn dump_field(field: &ScalarField, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    write_field(field, BufWriter::new(file)).map_err(|e| io_err(path, e))
}

/// Reads a dump back. The grid is rebuilt from origin, spacing and point
/// counts; all points come back free.
pub fn load_field(path: &Path) -> Result<ScalarField, CliError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let mut next = || -> Result<String, CliError> {
        lines
            .next()
            .ok_or_else(|| io_err(path, "truncated dump"))?
            .map_err(|e| io_err(path, e))
    };
    let bad = |what: &str| io_err(path, format!("malformed header: {what}"));

    let dim: usize = next()?
        .strip_prefix("# dim ")
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| bad("dim"))?;
    let header = next()?;
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.len() != 4 + 3 * dim || words[0] != "#" || words[1] != "origin" {
        return Err(bad("geometry"));
    }
    let floats = |from: usize| -> Result<Vec<f64>, CliError> {
        words[from..from + dim]
            .iter()
            .map(|w| w.parse().map_err(|_| bad(w)))
            .collect()
    };
    let origin = floats(2)?;
    if words[2 + dim] != "spacing" || words[3 + 2 * dim] != "points" {
        return Err(bad("geometry"));
    }
    let spacing = floats(3 + dim)?;
    let points: Vec<usize> = words[4 + 2 * dim..]
        .iter()
        .map(|w| w.parse().map_err(|_| bad(w)))
        .collect::<Result<_, _>>()?;
    let cells: Vec<usize> = points.iter().map(|p| p.saturating_sub(1)).collect();
    let extent: Vec<f64> = spacing
        .iter()
        .zip(&cells)
        .map(|(h, n)| h * *n as f64)
        .collect();
    let grid = CartesianGrid::new(&origin, &extent, &cells)?;

    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        values.push(line.trim().parse::<f64>().map_err(|_| bad("value"))?);
    }
    Ok(ScalarField::from_values(grid, values)?)
}

/// One CSV row per run with per-phase wall time in seconds.
pub fn write_timings(report: &RunReport, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(
            out,
            "N,root,iterations,init,warm-start,sweeps,prolongation,combination,total"
        )?;
        for row in &report.rows {
            let p = &row.phases;
            writeln!(
                out,
                "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
                row.n,
                row.root
                    .map(|r| r.to_string())
                    .unwrap_or_else(|| "-".into()),
                row.iterations,
                p.init.as_secs_f64(),
                p.warm_start.as_secs_f64(),
                p.sweeps.as_secs_f64(),
                p.prolongation.as_secs_f64(),
                p.combination.as_secs_f64(),
                p.total.as_secs_f64(),
            )?;
        }
        out.flush()
    };
    write(&mut out).map_err(|e| io_err(path, e))
}
