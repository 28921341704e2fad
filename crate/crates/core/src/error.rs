use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown parameter set `{0}`")]
    UnknownParamSet(String),

    #[error("unknown digest `{0}`")]
    UnknownDigest(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),

    #[error("value out of range: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed hex `{0}`")]
    Hex(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("one-time key {} has already been used; refusing to sign again", .0.display())]
    KeyReused(PathBuf),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
