use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("charts differ")]
    ChartMismatch,
    #[error("dimension {found} not supported here (expected {expected})")]
    Dimension { expected: String, found: usize },
    #[error("grade {grade} out of range for dimension {n}")]
    GradeOutOfRange { grade: usize, n: usize },
    #[error("coframe is singular (determinant simplifies to 0)")]
    SingularCoframe,
    #[error("connection is not metric-compatible: {0}")]
    Metricity(String),
    #[error("loop is not closed (gap {0:e})")]
    NotClosed(f64),
    #[error("left the chart domain at t = {t:e}: {detail}")]
    OutOfDomain { t: f64, detail: String },
    #[error("normal is not a unit vector (|n| = {0})")]
    NonUnitNormal(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("Jacobi identity fails for indices ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
