use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::{Duration, Instant};

use sgsweep_core::{
    emit_table, error_norms, solve_single_grid, solve_sparse, CartesianGrid, ErrorNorms,
    RefinementStudy, ScalarField, SparsePlan,
};

use crate::config::{Mode, RunConfig};
use crate::dump::{dump_field, write_timings};
use crate::CliError;

/// Per-phase wall time of one run. Component phases are summed over all
/// component grids.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseReport {
    pub init: Duration,
    pub warm_start: Duration,
    pub sweeps: Duration,
    pub prolongation: Duration,
    pub combination: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone)]
pub struct RunRow {
    /// Cells per axis of the single grid or of the sparse target grid.
    pub n: usize,
    /// Root cells per axis (sparse runs).
    pub root: Option<usize>,
    pub norms: Option<ErrorNorms>,
    /// High-order sweeps (the largest over components for sparse runs).
    pub iterations: usize,
    pub phases: PhaseReport,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub mode: Mode,
    pub rows: Vec<RunRow>,
    /// Field of the last row.
    pub field: ScalarField,
}

impl RunReport {
    pub fn study(&self) -> RefinementStudy {
        let mut study = RefinementStudy::default();
        for row in &self.rows {
            study.push(row.n, row.norms, row.phases.total);
        }
        study
    }

    pub fn table(&self) -> Result<String, CliError> {
        let mut buf = Vec::new();
        emit_table(&self.study(), &mut buf)?;
        Ok(String::from_utf8(buf).expect("csv is ascii"))
    }
}

/// Runs every row of the configured study and writes the requested outputs.
pub fn run_config(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let spec = cfg.problem_spec()?;
    let sweep = cfg.sweep_config(&spec);
    let dim = spec.dim();
    let mut rows = Vec::with_capacity(cfg.study);
    let mut last = None;
    for k in 0..cfg.study {
        let scale = 1usize << k;
        let start = Instant::now();
        let (row, field) = match cfg.mode {
            Mode::Single => {
                let n = cfg.nh * scale;
                let grid = CartesianGrid::new(&spec.origin, &spec.extent, &vec![n; dim])?;
                let sol = solve_single_grid(&spec, &grid, &sweep)?;
                let phases = PhaseReport {
                    init: sol.timings.init,
                    warm_start: sol.timings.warm_start,
                    sweeps: sol.timings.sweeps,
                    total: start.elapsed(),
                    ..PhaseReport::default()
                };
                let row = RunRow {
                    n,
                    root: None,
                    norms: None,
                    iterations: sol.iterations,
                    phases,
                };
                (row, sol.field)
            }
            Mode::Sparse => {
                let nr = cfg.nr * scale;
                let plan = SparsePlan::semi_coarsened_family(
                    &spec.origin,
                    &spec.extent,
                    &vec![nr; dim],
                    cfg.nl,
                )?;
                let sol = solve_sparse(&spec, &plan, &sweep, cfg.prolongation, cfg.workers)?;
                let mut phases = PhaseReport {
                    prolongation: sol.timings.prolongation,
                    combination: sol.timings.combination,
                    total: start.elapsed(),
                    ..PhaseReport::default()
                };
                for c in &sol.components {
                    phases.init += c.timings.init;
                    phases.warm_start += c.timings.warm_start;
                    phases.sweeps += c.timings.sweeps;
                }
                let iterations = sol
                    .components
                    .iter()
                    .map(|c| c.iterations)
                    .max()
                    .unwrap_or(0);
                let n = plan.finest_grid().cells()[0];
                let row = RunRow {
                    n,
                    root: Some(nr),
                    norms: None,
                    iterations,
                    phases,
                };
                (row, sol.field)
            }
        };
        let norms = if spec.exact.is_some() {
            Some(error_norms(&field, &spec)?)
        } else {
            None
        };
        rows.push(RunRow { norms, ..row });
        last = Some(field);
    }
    let report = RunReport {
        mode: cfg.mode,
        rows,
        field: last.expect("study has at least one row"),
    };

    if let Some(path) = &cfg.table_out {
        let file =
            File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut out = BufWriter::new(file);
        emit_table(&report.study(), &mut out)?;
        out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    }
    if let Some(path) = &cfg.field_out {
        dump_field(&report.field, path)?;
    }
    if let Some(path) = &cfg.timing_out {
        write_timings(&report, path)?;
    }
    Ok(report)
}
