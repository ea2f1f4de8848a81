use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::Parser;
use serde::Deserialize;
use sgsweep_core::{
    make_benchmark, BandShape, BoundaryData, Case, DerivativeMode, HamiltonianSpec, PointFn,
    ProblemSpec, Prolongation, SweepConfig,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    Sparse,
}

impl std::str::FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(Mode::Single),
            "sparse" => Ok(Mode::Sparse),
            other => Err(CliError::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Command-line flags. Every flag overrides the matching config-file key.
#[derive(Debug, Default, Parser)]
#[command(
    name = "sgsweep",
    version,
    about = "Fast sweeping WENO solver for static Hamilton-Jacobi equations"
)]
pub struct Args {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Benchmark number, 1 to 6.
    #[arg(long)]
    pub example: Option<u8>,
    /// 2d or 3d, for examples 5 and 6.
    #[arg(long)]
    pub case: Option<String>,
    /// single or sparse.
    #[arg(long)]
    pub mode: Option<String>,
    /// lagrange or weno.
    #[arg(long)]
    pub prolongation: Option<String>,
    /// weno3, linear3 or first-order.
    #[arg(long)]
    pub derivative: Option<String>,
    /// coarsest or per-axis.
    #[arg(long)]
    pub band: Option<String>,
    /// Cells per axis of the single grid.
    #[arg(long)]
    pub nh: Option<usize>,
    /// Cells per axis of the sparse root grid.
    #[arg(long)]
    pub nr: Option<usize>,
    /// Finest sparse level.
    #[arg(long)]
    pub nl: Option<u32>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Threshold of the first-order warm start; 0 disables it.
    #[arg(long)]
    pub first_order_delta: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Number of refinement rows, each doubling the grid.
    #[arg(long)]
    pub study: Option<usize>,
    #[arg(long)]
    pub table_out: Option<PathBuf>,
    #[arg(long)]
    pub field_out: Option<PathBuf>,
    #[arg(long)]
    pub timing_out: Option<PathBuf>,
}

/// Point-source Eikonal problem with constant slowness, described in the
/// `[custom]` table of a config file.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CustomProblem {
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    pub sources: Vec<Vec<f64>>,
    #[serde(default = "one")]
    pub slowness: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn one() -> f64 {
    1.0
}

fn default_gamma() -> f64 {
    0.8
}

impl CustomProblem {
    pub fn to_spec(&self) -> Result<ProblemSpec, CliError> {
        let dim = self.origin.len();
        if self.sources.iter().any(|s| s.len() != dim) {
            return Err(CliError::Config(
                "custom source has the wrong dimension".into(),
            ));
        }
        if !(self.slowness > 0.0) {
            return Err(CliError::Config("custom slowness must be positive".into()));
        }
        let sources = self.sources.clone();
        let slowness = self.slowness;
        let exact: PointFn = Arc::new(move |x| {
            sources
                .iter()
                .map(|s| {
                    s.iter()
                        .zip(x)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min)
                * slowness
        });
        let points: Vec<(Vec<f64>, f64)> = self.sources.iter().map(|s| (s.clone(), 0.0)).collect();
        let spec = ProblemSpec {
            name: "custom".into(),
            origin: self.origin.clone(),
            extent: self.extent.clone(),
            hamiltonian: HamiltonianSpec::eikonal(dim),
            rhs: Arc::new(move |_| slowness),
            boundary: BoundaryData::points(&points),
            exact: Some(exact),
            gamma: self.gamma,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Keys accepted in a config file; same names as the flags, with `-`
/// written as `_`.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub example: Option<u8>,
    pub case: Option<String>,
    pub mode: Option<String>,
    pub prolongation: Option<String>,
    pub derivative: Option<String>,
    pub band: Option<String>,
    pub nh: Option<usize>,
    pub nr: Option<usize>,
    pub nl: Option<u32>,
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub first_order_delta: Option<f64>,
    pub max_iter: Option<usize>,
    pub workers: Option<usize>,
    pub study: Option<usize>,
    pub table_out: Option<PathBuf>,
    pub field_out: Option<PathBuf>,
    pub timing_out: Option<PathBuf>,
    pub custom: Option<CustomProblem>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Which problem to solve.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemChoice {
    Benchmark { id: u8, case: Option<Case> },
    Custom(CustomProblem),
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemChoice,
    pub mode: Mode,
    pub prolongation: Prolongation,
    pub sweep: SweepConfig,
    /// Overrides the problem's own gamma when set.
    pub gamma: Option<f64>,
    pub nh: usize,
    pub nr: usize,
    pub nl: u32,
    pub workers: usize,
    pub study: usize,
    pub table_out: Option<PathBuf>,
    pub field_out: Option<PathBuf>,
    pub timing_out: Option<PathBuf>,
}

fn parse_with<T: std::str::FromStr>(value: Option<String>) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .map(|v| v.parse::<T>().map_err(|e| CliError::Config(e.to_string())))
        .transpose()
}

impl RunConfig {
    /// Merges flags over the file (if any) and fills in defaults.
    pub fn resolve(args: Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::merge(args, file)
    }

    pub fn merge(args: Args, file: FileConfig) -> Result<Self, CliError> {
        let case: Option<Case> = parse_with(args.case.or(file.case))?;
        let example = args.example.or(file.example);
        let problem = match (example, file.custom) {
            (Some(id), _) => ProblemChoice::Benchmark { id, case },
            (None, Some(custom)) => ProblemChoice::Custom(custom),
            (None, None) => {
                return Err(CliError::Config(
                    "choose an --example or a [custom] problem".into(),
                ))
            }
        };
        let dim = match &problem {
            ProblemChoice::Benchmark { id: 3, .. } => 3,
            ProblemChoice::Benchmark { case: Some(c), .. } => c.dim(),
            ProblemChoice::Benchmark { .. } => 2,
            ProblemChoice::Custom(c) => c.origin.len(),
        };
        let is_advection = matches!(problem, ProblemChoice::Benchmark { id: 1, .. });

        let mode = parse_with(args.mode.or(file.mode))?.unwrap_or(Mode::Single);
        let prolongation =
            parse_with(args.prolongation.or(file.prolongation))?.unwrap_or(if is_advection {
                Prolongation::Lagrange
            } else {
                Prolongation::weno()
            });
        let derivative =
            parse_with(args.derivative.or(file.derivative))?.unwrap_or(if is_advection {
                DerivativeMode::Linear3
            } else {
                DerivativeMode::Weno3
            });
        let band: BandShape = parse_with(args.band.or(file.band))?.unwrap_or_default();

        let defaults = SweepConfig::default();
        let first_order_delta = args.first_order_delta.or(file.first_order_delta);
        let sweep = SweepConfig {
            gamma: 1.0,
            epsilon: args.epsilon.or(file.epsilon).unwrap_or(defaults.epsilon),
            delta: args.delta.or(file.delta).unwrap_or(defaults.delta),
            max_iterations: args
                .max_iter
                .or(file.max_iter)
                .unwrap_or(defaults.max_iterations),
            derivative_mode: derivative,
            warm_start_delta: match first_order_delta {
                Some(d) if d == 0.0 => None,
                Some(d) => Some(d),
                None => defaults.warm_start_delta,
            },
            band_shape: band,
            ..defaults
        };
        let prolongation = match (prolongation, args.epsilon.or(file.epsilon)) {
            (Prolongation::Weno { .. }, Some(epsilon)) => Prolongation::Weno { epsilon },
            (p, _) => p,
        };

        let nl = args.nl.or(file.nl).unwrap_or(3);
        let cfg = RunConfig {
            problem,
            mode,
            prolongation,
            sweep,
            gamma: args.gamma.or(file.gamma),
            nh: args
                .nh
                .or(file.nh)
                .unwrap_or(if dim == 3 { 40 } else { 160 }),
            nr: args
                .nr
                .or(file.nr)
                .unwrap_or(if dim == 3 { 10 } else { 20 }),
            nl,
            workers: args
                .workers
                .or(file.workers)
                .unwrap_or_else(|| default_workers(dim, nl)),
            study: args.study.or(file.study).unwrap_or(1),
            table_out: args.table_out.or(file.table_out),
            field_out: args.field_out.or(file.field_out),
            timing_out: args.timing_out.or(file.timing_out),
        };
        cfg.validate(dim)?;
        Ok(cfg)
    }

    fn validate(&self, dim: usize) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.study == 0 {
            return bad("study needs at least one row");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0) {
                return bad("gamma must be positive");
            }
        }
        match self.mode {
            Mode::Single if self.nh < sgsweep_core::grid::MIN_CELLS => bad("nh must be at least 4"),
            Mode::Sparse if self.nr < sgsweep_core::grid::MIN_CELLS => bad("nr must be at least 4"),
            Mode::Sparse if self.nl < 1 => bad("nl must be at least 1"),
            Mode::Sparse if dim == 3 && self.nl < 2 => bad("3D sparse runs need nl >= 2"),
            Mode::Sparse if !(2..=3).contains(&dim) => bad("sparse mode needs a 2D or 3D problem"),
            _ => Ok(()),
        }?;
        let mut probe = self.sweep.clone();
        probe.gamma = self.gamma.unwrap_or(1.0);
        probe.validate()?;
        Ok(())
    }

    /// The problem to solve, with the gamma override applied.
    pub fn problem_spec(&self) -> Result<ProblemSpec, CliError> {
        let mut spec = match &self.problem {
            ProblemChoice::Benchmark { id, case } => make_benchmark(*id, *case)?,
            ProblemChoice::Custom(c) => c.to_spec()?,
        };
        if let Some(g) = self.gamma {
            spec.gamma = g;
        }
        Ok(spec)
    }

    /// Sweep settings with the problem's gamma filled in.
    pub fn sweep_config(&self, spec: &ProblemSpec) -> SweepConfig {
        SweepConfig {
            gamma: spec.gamma,
            ..self.sweep.clone()
        }
    }
}

/// One worker per component grid, capped by the available cores.
fn default_workers(dim: usize, nl: u32) -> usize {
    let cores = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let entries = match dim {
        3 => {
            let shell = |s: u32| ((s + 1) * (s + 2) / 2) as usize;
            shell(nl) + shell(nl.saturating_sub(1)) + if nl >= 2 { shell(nl - 2) } else { 0 }
        }
        _ => 2 * nl as usize + 1,
    };
    cores.min(entries).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Args {
        Args::try_parse_from(std::iter::once("sgsweep").chain(list.iter().copied())).unwrap()
    }

    #[test]
    fn benchmark_defaults() {
        let cfg = RunConfig::merge(args(&["--example", "1"]), FileConfig::default()).unwrap();
        assert_eq!(cfg.mode, Mode::Single);
        assert_eq!(cfg.sweep.derivative_mode, DerivativeMode::Linear3);
        assert_eq!(cfg.prolongation, Prolongation::Lagrange);
        assert_eq!((cfg.nh, cfg.nr, cfg.nl), (160, 20, 3));
        assert_eq!(cfg.sweep.delta, 1e-11);
        assert_eq!(cfg.sweep.epsilon, 1e-6);
        assert_eq!(cfg.sweep.warm_start_delta, Some(1e-4));

        let cfg = RunConfig::merge(args(&["--example", "3"]), FileConfig::default()).unwrap();
        assert_eq!(cfg.sweep.derivative_mode, DerivativeMode::Weno3);
        assert_eq!(cfg.prolongation, Prolongation::weno());
        assert_eq!(cfg.nr, 10);
    }

    #[test]
    fn flags_win_over_the_file() {
        let file =
            FileConfig::parse("example = 2\nmode = \"sparse\"\nnr = 40\ngamma = 0.3\n").unwrap();
        let cfg = RunConfig::merge(args(&["--nr", "10", "--mode", "single"]), file).unwrap();
        assert_eq!(cfg.mode, Mode::Single);
        assert_eq!(cfg.nr, 10);
        assert_eq!(cfg.gamma, Some(0.3));
        assert_eq!(cfg.problem, ProblemChoice::Benchmark { id: 2, case: None });
    }

    #[test]
    fn invalid_settings_are_rejected() {
        let merge = |a: &[&str]| RunConfig::merge(args(a), FileConfig::default());
        assert!(matches!(merge(&[]), Err(CliError::Config(_))));
        assert!(merge(&["--example", "2", "--mode", "diagonal"]).is_err());
        assert!(merge(&["--example", "2", "--nh", "2"]).is_err());
        assert!(merge(&["--example", "3", "--mode", "sparse", "--nl", "1"]).is_err());
        assert!(merge(&["--example", "2", "--gamma=-1"]).is_err());
        assert!(merge(&["--example", "2", "--workers", "0"]).is_err());
        assert!(FileConfig::parse("exampel = 2").is_err());
    }

    #[test]
    fn zero_first_order_delta_disables_the_warm_start() {
        let cfg = RunConfig::merge(
            args(&["--example", "2", "--first-order-delta", "0"]),
            FileConfig::default(),
        )
        .unwrap();
        assert_eq!(cfg.sweep.warm_start_delta, None);
    }

    #[test]
    fn custom_problem_from_file() {
        let file = FileConfig::parse(
            "[custom]\norigin = [0.0, 0.0]\nextent = [1.0, 1.0]\nsources = [[0.5, 0.5]]\nslowness = 2.0\n",
        )
        .unwrap();
        let cfg = RunConfig::merge(Args::default(), file).unwrap();
        let spec = cfg.problem_spec().unwrap();
        assert_eq!(spec.exact_solution(&[0.5, 1.0]).unwrap(), 1.0);
        assert_eq!(spec.gamma, 0.8);
    }

    #[test]
    fn worker_default_is_capped_by_plan_size() {
        assert!(default_workers(2, 3) <= 7);
        assert!(default_workers(3, 3) <= 19);
        assert!(default_workers(2, 1) >= 1);
    }
}
