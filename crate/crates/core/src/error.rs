use std::io;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension {0}: at least 2 is required")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not a power of two; the fold mapping is undefined")]
    UnsupportedDimension(usize),

    #[error("matrix is not unitary: max |UU^dag - I| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("gate index {index} out of range for an alphabet of {alphabet} gates")]
    IndexOutOfRange { index: usize, alphabet: usize },

    #[error("word integer out of range for length {length} over {alphabet} gates")]
    IntegerOutOfRange { length: usize, alphabet: usize },

    #[error("operation requires a non-empty word")]
    EmptyWord,

    #[error("enumeration of {required} words exceeds the cap of {cap}; raise the cap to at least {required}")]
    EnumerationCap { required: u128, cap: u64 },

    #[error("empty net: {0}")]
    EmptyNet(String),

    #[error("insufficient density: {available} points available, {target} required (short by {})", target - available)]
    InsufficientDensity { available: u64, target: u64 },

    #[error("gate set `{0}` does not contain inverse gates")]
    InversesUnavailable(String),

    #[error("gate-set fingerprint mismatch: file has {found}, expected {expected}")]
    FingerprintMismatch { expected: String, found: String },

    #[error("checksum mismatch in net file")]
    Checksum,

    #[error("unsupported format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
