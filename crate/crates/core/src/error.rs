use std::fmt;

use thiserror::Error;

/// A row or column of a Cayley table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Column(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {i}"),
            Line::Column(j) => write!(f, "column {j}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoopError {
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    Shape {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("empty table")]
    Empty,
    #[error("entry {value} at ({row}, {col}) is outside 0..{order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("{line} repeats symbol {symbol}")]
    LatinViolation { line: Line, symbol: usize },
    #[error("element {element} out of range for order {order}")]
    Index { element: usize, order: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("{images:?} is not a bijection")]
    NotABijection { images: Vec<usize> },
    #[error("quasigroup has no two-sided identity")]
    NotALoop,
    #[error("triple is not an isotopism between the given loops")]
    NotAnIsotopism,
    #[error("generators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("generator {0} is not a weak inverse permutation")]
    NotWeakInverse(usize),
    #[error("order {order} exceeds the cap of {cap} (pass an explicit override to go further)")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("order must be at least 1")]
    OrderTooSmall,
    #[error("random generation of order {order} failed after {restarts} restarts")]
    GenerationFailure { order: usize, restarts: usize },
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = LoopError> = std::result::Result<T, E>;
