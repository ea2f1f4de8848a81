use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown benchmark: {0}")]
    UnknownBenchmark(String),

    #[error("problem `{0}` has no exact solution")]
    NoExactSolution(String),

    #[error("boundary band is empty on grid with cells {0:?}")]
    EmptyBand(Vec<usize>),

    #[error("non-finite value at point {index:?} during sweep {iteration}")]
    Divergence { index: Vec<usize>, iteration: usize },

    #[error("no convergence after {iterations} sweeps (last residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("component grid with levels {levels:?} failed: {source}")]
    Component {
        levels: Vec<u32>,
        #[source]
        source: Box<Error>,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("error value must be positive, got {0}")]
    NonPositiveError(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the error reports a solver that failed to converge or
    /// produced non-finite values, as opposed to a bad input.
    pub fn is_convergence_failure(&self) -> bool {
        match self {
            Error::Divergence { .. } | Error::NotConverged { .. } => true,
            Error::Component { source, .. } => source.is_convergence_failure(),
            _ => false,
        }
    }
}
