use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at token {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("duplicate element `{0}`")]
    Duplicate(String),
    #[error("unknown element `{0}`")]
    Unknown(String),
    #[error("order relation has a cycle through `{0}`")]
    Cycle(String),
    #[error("labels for `{0}` are not a bijection onto its lower covers")]
    BadLabels(String),
    #[error("relation is not transitive: {0} < {1} < {2}")]
    NotTransitive(String, String, String),
    #[error("relation is not antisymmetric on `{0}` and `{1}`")]
    NotAntisymmetric(String, String),
    #[error("subset is not a lower set")]
    NotLower,
    #[error("`{0}` is not a maximal element")]
    NotMaximal(String),
    #[error("invalid ideal data: {0}")]
    BadIdeal(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("operands belong to different posets")]
    PosetMismatch,
    #[error("valuation v(f) = {0}, expected 0")]
    Valuation(u32),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
