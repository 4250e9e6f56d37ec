use thiserror::Error;

/// Errors produced by matrix construction, kernels, I/O and the model.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix data violates a structural invariant (index out of bounds,
    /// malformed offsets).
    #[error("structural error: {0}")]
    Structural(String),

    /// A caller-supplied parameter is invalid or dimensions disagree.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Matrix Market input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Binary cache file is malformed or truncated.
    #[error("invalid SELL cache: {0}")]
    Format(String),

    #[error("unsupported SELL cache version {found} (expected {expected})")]
    Version { found: u16, expected: u16 },

    #[error("SELL cache checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { stored: u32, computed: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}
