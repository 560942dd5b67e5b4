use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a partition: {0:?} is not weakly decreasing")]
    NotAPartition(Vec<i64>),

    #[error("not a permutation of 1..{n}: {values:?}")]
    NotAPermutation { n: usize, values: Vec<i64> },

    #[error("inner shape {inner:?} is not contained in outer shape {outer:?}")]
    InvalidShape { outer: Vec<u32>, inner: Vec<u32> },

    #[error("weight total {weight} does not match skew size {shape}")]
    SizeMismatch { shape: u64, weight: u64 },

    #[error("the polytope has no lattice points")]
    EmptyPolytope,

    #[error("duplicate abscissa {0} in interpolation data")]
    DuplicateAbscissa(i64),

    #[error("verification failed at n = {x}: polynomial gives {expected}, direct count gives {actual}")]
    VerificationFailed {
        x: i64,
        expected: String,
        actual: String,
    },

    #[error("h*-coefficient {index} is not an integer ({value})")]
    NonIntegralHStar { index: usize, value: String },

    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cancelled")]
    Cancelled,
}

impl Error {
    pub(crate) fn verification(x: i64, expected: impl ToString, actual: &BigInt) -> Self {
        Error::VerificationFailed {
            x,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
