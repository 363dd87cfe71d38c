use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("field is not divergence-free (residual {residual:.3e} > {tolerance:.1e})")]
    NotDivergenceFree { residual: f64, tolerance: f64 },
    #[error("time step {dt:.3e} exceeds CFL bound {bound:.3e}")]
    Cfl { dt: f64, bound: f64 },
    #[error("non-finite state at t = {t:.6e}")]
    NonFinite { t: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("spectral support dominated by unresolved blocks (share {share:.3})")]
    Unresolved { share: f64 },
    #[error("support lemma requires j0 >= 4, got {0}")]
    SupportLemmaVoid(i32),
    #[error("exponents outside admissible range: {0}")]
    Exponents(String),
    #[error("(sigma, p) = ({sigma}, {p}) rejected: {bound}")]
    Inadmissible { sigma: f64, p: f64, bound: String },
    #[error("trajectory does not cover t = {t:.6e} (last sample {last:.6e})")]
    TrajectoryGap { t: f64, last: f64 },
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error("time grids differ: {0}")]
    TimeGrid(String),
    #[error("missing trajectory component: {0}")]
    Missing(String),
    #[error("quadrature under-resolved: {required} nodes needed along {axis}, have {have}")]
    UnderResolved { axis: &'static str, required: usize, have: usize },
    #[error("config: {0}")]
    Config(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
