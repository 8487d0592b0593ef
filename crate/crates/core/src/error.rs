use thiserror::Error;

use crate::var::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("truth table for `{name}` has length {got}, expected {expected}")]
    TableLength {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("arity {arity} exceeds the configured cap of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("constraint set is empty")]
    EmptyConstraintSet,
    #[error("duplicate constraint name `{0}`")]
    DuplicateName(String),
    #[error("unknown constraint `{0}`")]
    UnknownConstraint(String),
    #[error("{what}: size {size} exceeds guard {limit}")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("instance universes differ")]
    UniverseMismatch,
    #[error("variable `{0}` is not in the universe")]
    UnknownVariable(Var),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("not a permutation of the universe: {0}")]
    NotAPermutation(String),
    #[error("constraint `{0}` is not 2-affine")]
    NotTwoAffine(String),
    #[error("constants are not allowed here")]
    ConstantNotAllowed,
    #[error("invalid closure flags: {0}")]
    InvalidFlags(&'static str),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(u32),
    #[error("need at least 3 non-isolated vertices, got {0}")]
    TooFewVertices(usize),
    #[error("constraint `{0}` satisfies the closure; no witnesses exist")]
    NoWitness(String),
    #[error("variable name `{0}` is reserved")]
    NameClash(String),
    #[error("realization does not restrict to canonical form {0}")]
    RestrictionMismatch(u8),
    #[error("constraint set is 2-affine; isomorphism is in P and admits no GI reduction")]
    InP,
    #[error("realization failed: {0}")]
    RealizationFailed(String),
    #[error("gadget target `{0}` has no attachment case")]
    NotAttachable(&'static str),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}
