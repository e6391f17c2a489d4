use crate::ratfun::Scalar;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of construction and evaluation.
///
/// Note that a *verification* coming out unequal is not an `Error`: checks
/// return a [`crate::Verdict`] so that failures can be reported with a witness.
/// Errors are reserved for ill-posed inputs (poles, repeated parameters,
/// cardinality mismatches, bad configs).
#[derive(Debug, Error)]
pub enum Error {
    #[error("model constant c must be nonzero")]
    ZeroModelConstant,

    #[error("twist components must be nonzero")]
    ZeroTwist,

    #[error("pole: kernel evaluated at coinciding arguments x = y = {0}")]
    Pole(Scalar),

    #[error("degenerate set `{label}`: value {value} occurs more than once")]
    DegenerateSet { label: String, value: Scalar },

    #[error("genericity violation: ({x}) - ({y}) = {diff} lies in {{0, +c, -c}}")]
    Genericity { x: Scalar, y: Scalar, diff: Scalar },

    #[error("cardinality mismatch: {0}")]
    Cardinality(String),

    #[error("chain length {l} exceeds the cap {cap}; raise the cap explicitly to allow this")]
    ChainTooLong { l: usize, cap: usize },

    #[error("invalid split: {0}")]
    Split(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("exhausted retries while drawing jointly generic rationals")]
    DrawExhausted,

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
