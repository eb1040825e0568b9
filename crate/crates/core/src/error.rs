use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: isize, found: isize },

    #[error("{what} out of range: {value} not in {range}")]
    OutOfRange {
        what: &'static str,
        value: isize,
        range: String,
    },

    #[error("invalid monotone map: {0}")]
    InvalidMap(String),

    #[error("malformed simplicial set: {0}")]
    Malformed(String),

    #[error("unknown cell {0}")]
    UnknownCell(usize),

    #[error("not a simplicial map: {0}")]
    NotSimplicial(String),

    #[error("map does not preserve marking: cell {cell} ({label}) is marked but its image is not")]
    MarkingNotPreserved { cell: usize, label: String },

    #[error("not an inclusion: {0}")]
    NotInclusion(String),

    #[error("not an entire map: {0}")]
    NotEntire(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, value: isize, range: impl Into<String>) -> Error {
    Error::OutOfRange {
        what,
        value,
        range: range.into(),
    }
}
