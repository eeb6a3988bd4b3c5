use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the moment toolkit.
#[derive(Debug, Error)]
pub enum ZernikeError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("factorial sum overflows at order {order} (limit {limit})")]
    Overflow { order: u32, limit: u32 },

    #[error("argument {0} outside [-1, 1]")]
    Domain(f64),

    #[error("transform length {len} aliases order {order}; at least {min} required")]
    Aliasing { len: usize, order: u32, min: usize },

    #[error("non-finite radial value ({method}, order {order})")]
    NonFinite { method: &'static str, order: u32 },

    #[error("undefined denominator: {0}")]
    UndefinedDenominator(&'static str),

    #[error("{path}: {reason}")]
    Io { path: PathBuf, reason: String },

    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
}

impl ZernikeError {
    pub fn param(msg: impl Into<String>) -> Self {
        ZernikeError::Parameter(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, reason: impl ToString) -> Self {
        ZernikeError::Io {
            path: path.into(),
            reason: reason.to_string(),
        }
    }

    /// Process exit code: 1 parameter, 2 I/O, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            ZernikeError::Parameter(_) => 1,
            ZernikeError::Io { .. } | ZernikeError::Parse { .. } => 2,
            ZernikeError::Overflow { .. }
            | ZernikeError::Domain(_)
            | ZernikeError::Aliasing { .. }
            | ZernikeError::NonFinite { .. }
            | ZernikeError::UndefinedDenominator(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, ZernikeError>;
