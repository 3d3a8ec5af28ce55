use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("axis {axis} out of range for a {dim}D grid")]
    InvalidAxis { axis: usize, dim: usize },
    #[error("expected a {expected}-component field, got {found}")]
    WrongComponents { expected: usize, found: usize },
    #[error("expected a {expected}D grid, got {found}D")]
    WrongDimension { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field is not divergence-free (max |div u| = {0:e})")]
    NotDivergenceFree(f64),
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("empty diagnostic series")]
    EmptySeries,
    #[error("horizon T = {horizon} lies beyond the recorded range (last t = {last})")]
    HorizonOutOfRange { horizon: f64, last: f64 },
    #[error("non-positive Q entry {value} (alpha = {alpha}, T = {horizon})")]
    NonPositiveQ { value: f64, alpha: f64, horizon: f64 },
    #[error("time grids differ between runs")]
    MismatchedTimeGrids,
    #[error("characteristic solve did not converge at x = {x}, t = {t}")]
    NoConvergence { x: f64, t: f64 },
    #[error("t = {t} is at or beyond the Burgers blow-up time {blowup}")]
    BeyondBlowup { t: f64, blowup: f64 },
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("run alpha = {alpha}, nu = {nu} failed: {source}")]
    RunFailed {
        alpha: f64,
        nu: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("malformed file {path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
