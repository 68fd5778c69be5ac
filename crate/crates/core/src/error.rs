use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

/// Which of the two tower invariants a coherence check tripped on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceKind {
    /// Top-left block of the larger level differs from the smaller level.
    Restriction,
    /// An off-diagonal block of the larger level is nonzero.
    Reduction,
}

impl CoherenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoherenceKind::Restriction => "restriction",
            CoherenceKind::Reduction => "reduction",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid index chain: {0}")]
    InvalidChain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{} coherence violated between levels {alpha} and {beta} (max deviation {deviation:e})", kind.as_str())]
    CoherenceViolation {
        alpha: usize,
        beta: usize,
        deviation: f64,
        kind: CoherenceKind,
    },

    #[error("non-finite entry at level {level}, position ({row}, {col})")]
    NonFiniteEntry {
        level: usize,
        row: usize,
        col: usize,
    },

    #[error("level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("operands live on different index chains")]
    ChainMismatch,

    #[error("eigensolver did not converge at level {level}")]
    EigensolverFailure { level: usize },

    #[error("operator is not normal: level {level} commutator norm {deviation:e} exceeds {tol:e}")]
    NotNormal {
        level: usize,
        deviation: f64,
        tol: f64,
    },

    #[error("function table has no point within tolerance of spectral value {point}")]
    TableCoverageGap { point: Complex64 },

    #[error("character ({min_level}, {value}) is not a character of this tower")]
    UnknownCharacter { min_level: usize, value: Complex64 },

    #[error("point {x} lies outside every level interval")]
    OutOfDomain { x: f64 },

    #[error("invalid function spec: {0}")]
    InvalidFunction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable code used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidChain(_) => "INVALID_CHAIN",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::CoherenceViolation { .. } => "COHERENCE_VIOLATION",
            Error::NonFiniteEntry { .. } => "NON_FINITE_ENTRY",
            Error::LevelOutOfRange { .. } => "LEVEL_OUT_OF_RANGE",
            Error::ChainMismatch => "CHAIN_MISMATCH",
            Error::EigensolverFailure { .. } => "EIGENSOLVER_FAILURE",
            Error::NotNormal { .. } => "NOT_NORMAL",
            Error::TableCoverageGap { .. } => "TABLE_COVERAGE_GAP",
            Error::UnknownCharacter { .. } => "UNKNOWN_CHARACTER",
            Error::OutOfDomain { .. } => "OUT_OF_DOMAIN",
            Error::InvalidFunction(_) => "INVALID_FUNCTION",
            Error::Parse(_) => "PARSE_ERROR",
            Error::Io(_) => "IO_ERROR",
        }
    }

    pub fn context(&self) -> Value {
        match self {
            Error::CoherenceViolation {
                alpha,
                beta,
                deviation,
                kind,
            } => json!({
                "alpha": alpha,
                "beta": beta,
                "deviation": deviation,
                "kind": kind.as_str(),
            }),
            Error::NonFiniteEntry { level, row, col } => {
                json!({"level": level, "row": row, "col": col})
            }
            Error::LevelOutOfRange { level, max } => json!({"level": level, "max": max}),
            Error::EigensolverFailure { level } => json!({"level": level}),
            Error::NotNormal {
                level,
                deviation,
                tol,
            } => json!({"level": level, "deviation": deviation, "tol": tol}),
            Error::TableCoverageGap { point } => json!({"point": [point.re, point.im]}),
            Error::UnknownCharacter { min_level, value } => {
                json!({"min_level": min_level, "value": [value.re, value.im]})
            }
            Error::OutOfDomain { x } => json!({"x": x}),
            _ => Value::Null,
        }
    }

    /// `{code, message, context}` object emitted by the CLI on failure.
    pub fn to_json(&self) -> Value {
        json!({
            "code": self.code(),
            "message": self.to_string(),
            "context": self.context(),
        })
    }
}
