use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// Mismatching verdicts are never errors; they are reported as data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at offset {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("division by an expression that is identically zero")]
    DivisionByZero,

    #[error("cannot divide by a sum of distinct exponentials: {0}")]
    ExponentialDenominator(String),

    #[error("exponent must not itself contain exp(...): {0}")]
    NestedExponential(String),

    #[error("cyclic substitution: bound atom `{0}` occurs on a right-hand side")]
    CyclicBinding(String),

    #[error("expression is not polynomial in `{0}`")]
    NotPolynomial(String),

    #[error("total derivative would exceed jet order 2 (atom `{0}`)")]
    JetOrderOverflow(String),

    #[error("conditional invariance needs a nonzero xi0 coefficient")]
    ZeroXi0,

    #[error("invalid vector field: {0}")]
    InvalidField(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("restriction violated: {0}")]
    RestrictionViolated(String),

    #[error("parameter sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),

    #[error("transformed system leaves the DLV class: {0}")]
    LeavesClass(String),

    #[error("transformation is not invertible: {0}")]
    NonInvertible(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("reduction failed: {0}")]
    Reduction(String),

    #[error("catalog case not found: table {table}, case {case}")]
    CaseNotFound { table: u32, case: u32 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numeric evaluation failed: {0}")]
    Evaluation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
