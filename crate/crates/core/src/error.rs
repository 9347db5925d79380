use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: relative deviation {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// The family does not span the space: its lower frame bound is
    /// numerically zero relative to the upper bound.
    #[error("not a frame: lower bound {lower:e} <= {threshold:e} (upper bound {upper:e})")]
    NotAFrame {
        lower: f64,
        upper: f64,
        threshold: f64,
    },

    #[error("section size {requested} exceeds the available {available}")]
    SectionTooLarge { requested: usize, available: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("empty dimension: {0}")]
    Empty(String),

    /// Two representations cannot be multiplied: the inner frames do not form
    /// a (frame, dual frame) pair.
    #[error("incompatible frames: {0}")]
    IncompatibleFrames(String),

    #[error("parse error{}: {message}", location(*.line, *.column))]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

fn location(line: usize, column: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" at line {line}, column {column}")
    }
}

impl Error {
    pub(crate) fn parse(message: impl Into<String>) -> Self {
        Error::Parse {
            line: 0,
            column: 0,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
