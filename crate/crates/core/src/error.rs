use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Variants are grouped by the kind of failure so callers (the CLI in
/// particular) can map them onto exit codes: parameter and input problems
/// are validation failures, the rest are numerical or structural failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("degree {0} is in the parabolic/amenable regime; need degree >= 7")]
    Amenable(usize),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("vertex {0} is not in the map")]
    Lookup(usize),
    #[error("radius solver did not converge after {iterations} iterations (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("layout inconsistent at edge ({0}, {1}): residual {2:e}")]
    Layout(usize, usize, f64),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("instance too large: {0}")]
    Size(String),
    #[error("bijection failure: {0}")]
    Bijection(String),
    #[error("flow audit failed: {0}")]
    FlowAudit(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// True for errors caused by bad user input rather than a numerical or
    /// structural failure during computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_) | Error::Amenable(_) | Error::Input(_) | Error::Parse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
