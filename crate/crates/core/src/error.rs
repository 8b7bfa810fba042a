use thiserror::Error;

/// Errors shared by every layer of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field spec mismatch between operands")]
    SpecMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("modulus {0} is not an odd prime")]
    InvalidModulus(u64),

    #[error("cannot parse `{0}` as a field element")]
    BadElement(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("label `{0}` is already present")]
    LabelClash(String),

    #[error("matrix grid is not square ({rows} rows, {cols} columns)")]
    NotSquare { rows: usize, cols: usize },

    #[error("skew-symmetry violated at ({row}, {col})")]
    SkewViolation { row: String, col: String },

    #[error("matrix is not dense: zero entry at ({row}, {col})")]
    NotDense { row: String, col: String },

    #[error("entries must lie in {{-1, 0, 1}}")]
    NotSignMatrix,

    #[error("subset sweep refused for n = {n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("{0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("hypothesis failure: nontrivial HL-clan {0:?}")]
    HlDecomposable(Vec<String>),

    #[error("hypothesis failure: entry at ({row}, {col}) is not a sign multiple of its counterpart")]
    HypothesisViolation { row: String, col: String },

    #[error("witness verification failed at ({row}, {col})")]
    VerificationFailed { row: String, col: String },

    #[error("minor of subset {0:?} is not a square in the field")]
    NonSquareMinor(Vec<String>),

    #[error("order-2 minor of subset {0:?} is zero (source matrix not dense)")]
    ZeroPairMinor(Vec<String>),

    #[error("odd-order minor of subset {0:?} is nonzero")]
    OddMinorNonzero(Vec<String>),

    #[error("no consistent sign assignment; violated subset {0:?}")]
    Inconsistent(Vec<String>),

    #[error("malformed file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
