use thiserror::Error;

/// Errors reported by the library. Coordinates, blocks, lines and columns in
/// messages are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{what} is {value}, above the limit of {limit}")]
    Guard {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("permutation degree {found} does not match {expected}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("length {0} is not a multiple of 3")]
    LengthNotMultipleOfThree(usize),

    #[error("code is not invariant under (1,2,3)(4,5,6)...")]
    NotSigmaInvariant,

    #[error(
        "dimension {0} is odd; a sigma-invariant code with zero block sums has even dimension \
         because 2 has multiplicative order 2 modulo 3"
    )]
    OddDimension(usize),

    #[error("word has odd weight on block {block}")]
    OddBlock { block: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{0}")]
    Structure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn guard(what: &'static str, value: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::Guard {
            what,
            value: value.into(),
            limit: limit.into(),
        }
    }
}
