use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The direct-summation transform refuses inputs above its size guard.
    #[error("direct transform limited to {limit} samples, got {rows}x{cols}")]
    OracleSize {
        rows: usize,
        cols: usize,
        limit: usize,
    },

    #[error("frequency index {index} out of range for axis of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("image is {rows}x{cols}, need at least {min_rows}x{min_cols}")]
    ImageTooSmall {
        rows: usize,
        cols: usize,
        min_rows: usize,
        min_cols: usize,
    },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid noise spec `{spec}`: {reason}")]
    InvalidNoiseSpec { spec: String, reason: String },

    #[error("file not found: {0}")]
    MissingFile(PathBuf),

    #[error("unsupported image format in {path}: {detail}")]
    UnsupportedFormat { path: PathBuf, detail: String },

    #[error("corrupt image data in {path}: {detail}")]
    CorruptImage { path: PathBuf, detail: String },

    #[error("failed to encode {path}: {detail}")]
    Encode { path: PathBuf, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
