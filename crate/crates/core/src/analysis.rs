//! Error norms, observed convergence orders and refinement tables.

use std::io::Write;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::sweeper::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    /// Mean absolute error over the free points.
    pub l1: f64,
    pub linf: f64,
}

/// Error norms of `field` against `exact`, ignoring fixed points.
pub fn error_norms_with(field: &ScalarField, exact: impl Fn(&[f64]) -> f64) -> Result<ErrorNorms> {
    let grid = field.grid();
    let mut x = vec![0.0; grid.dim()];
    let mut sum = 0.0;
    let mut linf: f64 = 0.0;
    let mut count = 0usize;
    for p in 0..grid.len() {
        if field.fixed()[p] {
            continue;
        }
        grid.position_into(p, &mut x);
        let e = (field.values()[p] - exact(&x)).abs();
        sum += e;
        linf = linf.max(e);
        count += 1;
    }
    if count == 0 {
        return Err(Error::Empty("free points"));
    }
    Ok(ErrorNorms {
        l1: sum / count as f64,
        linf,
    })
}

/// Error norms of `field` against the problem's exact solution.
pub fn error_norms(field: &ScalarField, spec: &ProblemSpec) -> Result<ErrorNorms> {
    let exact = spec
        .exact
        .as_ref()
        .ok_or_else(|| Error::NoExactSolution(spec.name.clone()))?;
    error_norms_with(field, |x| exact(x))
}

/// `log2(e_k / e_{k+1})` for consecutive errors of a sequence of grids each
/// refined by a factor two.
pub fn convergence_orders(errors: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = errors.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(Error::NonPositiveError(*bad));
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    /// Cells per axis of the (finest) grid.
    pub n: usize,
    pub norms: Option<ErrorNorms>,
    pub cpu: Duration,
}

/// A sequence of runs under refinement.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RefinementStudy {
    pub rows: Vec<StudyRow>,
}

impl RefinementStudy {
    pub fn push(&mut self, n: usize, norms: Option<ErrorNorms>, cpu: Duration) {
        self.rows.push(StudyRow { n, norms, cpu });
    }

    pub fn has_errors(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.norms.is_some())
    }

    pub fn l1_orders(&self) -> Result<Vec<f64>> {
        self.orders(|n| n.l1)
    }

    pub fn linf_orders(&self) -> Result<Vec<f64>> {
        self.orders(|n| n.linf)
    }

    fn orders(&self, pick: impl Fn(&ErrorNorms) -> f64) -> Result<Vec<f64>> {
        let errors: Vec<f64> = self
            .rows
            .iter()
            .map(|r| {
                r.norms
                    .as_ref()
                    .map(&pick)
                    .ok_or_else(|| Error::NoExactSolution("study".into()))
            })
            .collect::<Result<_>>()?;
        convergence_orders(&errors)
    }
}

fn order_cell(prev: Option<f64>, cur: f64) -> String {
    match prev {
        Some(p) if p > 0.0 && cur > 0.0 => format!("{:.2}", (p / cur).log2()),
        _ => "-".to_string(),
    }
}

/// Writes the study as CSV. Error and order columns are dropped when any row
/// lacks an exact-solution comparison.
pub fn emit_table<W: Write>(study: &RefinementStudy, mut out: W) -> Result<()> {
    if study.rows.is_empty() {
        return Err(Error::Empty("refinement study"));
    }
    if study.has_errors() {
        writeln!(out, "N,L1,L1-order,Linf,Linf-order,CPU-seconds")?;
        let mut prev: Option<ErrorNorms> = None;
        for row in &study.rows {
            let n = row.norms.expect("checked above");
            writeln!(
                out,
                "{},{:.2e},{},{:.2e},{},{:.3}",
                row.n,
                n.l1,
                order_cell(prev.map(|p| p.l1), n.l1),
                n.linf,
                order_cell(prev.map(|p| p.linf), n.linf),
                row.cpu.as_secs_f64()
            )?;
            prev = Some(n);
        }
    } else {
        writeln!(out, "N,CPU-seconds")?;
        for row in &study.rows {
            writeln!(out, "{},{:.3}", row.n, row.cpu.as_secs_f64())?;
        }
    }
    Ok(())
}
