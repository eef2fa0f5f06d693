use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Variants are grouped so the CLI can tell a usage problem (bad name,
/// bad flag combination) from a data problem (malformed file, I/O).
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown cell `{0}` (try one of: {known})", known = crate::cells::CellId::NAMES.join(", "))]
    UnknownCell(String),

    #[error("unknown design `{0}` (expected exact, proposed, ac1, ac2, ac3, ac4 or ac5)")]
    UnknownDesign(String),

    #[error("cell `{cell}` takes {expected} inputs, got {got}")]
    Arity {
        cell: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("width {0} is out of range (supported: 4..=16)")]
    Width(u32),

    #[error("operand width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: u32, got: u32 },

    #[error("value {value} does not fit a signed {width}-bit word")]
    OperandRange { value: i64, width: u32 },

    #[error("invalid multiplier configuration: {0}")]
    Config(String),

    #[error("malformed partial-product matrix: {0}")]
    Matrix(String),

    #[error("exhaustive sweep at width {0} is too large (limit 12); use a sampled report instead")]
    SweepTooWide(u32),

    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    Dimensions(usize, usize, usize, usize),

    #[error("pgm: {0}")]
    Pgm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed input data or I/O rather than
    /// by a bad request.
    pub fn is_data_error(&self) -> bool {
        matches!(self, Error::Pgm(_) | Error::Io(_) | Error::Matrix(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
