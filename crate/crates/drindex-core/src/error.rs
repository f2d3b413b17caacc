use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A position or index fell outside `1..=len` (or `0..=len` for prefix queries).
    OutOfRange { what: &'static str, index: usize, len: usize },
    /// The call was well-typed but violated a documented precondition.
    Precondition(&'static str),
    /// User-supplied input was rejected (bad pattern, sentinel in payload, ...).
    InvalidArgument(&'static str),
    /// An internal invariant did not hold. Always a bug.
    Internal(&'static str),
}

impl Error {
    pub(crate) fn range(what: &'static str, index: usize, len: usize) -> Self {
        Error::OutOfRange { what, index, len }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange { what, index, len } => {
                write!(f, "{what}: index {index} out of range (len {len})")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
