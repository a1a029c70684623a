use std::path::PathBuf;

use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised while building or checking a fuzzy relational system.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix rows have unequal lengths (row {row} has {len}, expected {expected})")]
    RaggedMatrix {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("instance must have at least one row and one column")]
    Empty,

    #[error("{what} entry {index:?} = {value} is outside [0, 1]")]
    OutOfUnitInterval {
        what: &'static str,
        index: (usize, usize),
        value: f64,
    },

    #[error("system is infeasible: maximum solution violates rows {violated_rows:?}")]
    Infeasible {
        xbar: Vec<f64>,
        /// One-based row indices where the maximum solution fails.
        violated_rows: Vec<usize>,
    },

    #[error("column index {index} out of range for n = {n}")]
    ColumnOutOfRange { index: usize, n: usize },

    #[error("path chooses column {column} for row {row}, which is not a candidate")]
    InvalidPath { row: usize, column: usize },
}

/// Error produced while parsing an objective expression.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown identifier `{name}` at {line}:{column}")]
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("variable index {index} at {line}:{column} is outside 1..={n}")]
    IndexOutOfRange {
        index: i64,
        n: usize,
        line: usize,
        column: usize,
    },
}

/// Arithmetic failure while evaluating an objective at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("ln of non-positive argument {arg} at x = {point:?}")]
    LogDomain { arg: f64, point: Vec<f64> },

    #[error("division by zero at x = {point:?}")]
    DivisionByZero { point: Vec<f64> },

    #[error("negative base {base} raised to non-integer power {exponent} at x = {point:?}")]
    PowDomain {
        base: f64,
        exponent: f64,
        point: Vec<f64>,
    },

    #[error("point has dimension {actual}, objective expects {expected}")]
    Dimension { expected: usize, actual: usize },
}

/// Invalid solver or experiment configuration.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Fre(#[from] FreError),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("path space has {size} paths, above the cap of {cap}")]
    CapExceeded { size: BigUint, cap: u64 },

    #[error("run {run} failed: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
