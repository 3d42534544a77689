use thiserror::Error;

use crate::context::ContextId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {deviation:.3e})")]
    NonHermitian { deviation: f64 },
    #[error("operator is not a projection (max |P^2 - P| = {deviation:.3e})")]
    NotAProjection { deviation: f64 },
    #[error("state vector is not normalised (norm {norm})")]
    NotNormalised { norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square or rows are ragged")]
    NotSquare,
    #[error("operators {first} and {second} do not commute (|[A,B]| = {norm:.3e})")]
    NonCommuting { first: usize, second: usize, norm: f64 },
    #[error("joint decomposition has a single atom (trivial algebra)")]
    TrivialAlgebra,
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("unknown context {0}")]
    UnknownContext(ContextId),
    #[error("context {sub} is not a subcontext of {sup}")]
    NotASubcontext { sub: ContextId, sup: ContextId },
    #[error("operator is not in the algebra of context {0}")]
    NotInAlgebra(ContextId),
    #[error("operands belong to different context posets")]
    PosetMismatch,
    #[error("sieves are based at different contexts ({0} vs {1})")]
    BaseMismatch(ContextId, ContextId),
    #[error("empty interval window [{lower}, {upper}]")]
    EmptyWindow { lower: f64, upper: f64 },
    #[error("family is not a subobject: restriction from {sup} does not land in the component at {sub}")]
    NotASubobject { sup: ContextId, sub: ContextId },
    #[error("family at context {0} is not a sieve")]
    NotASieve(ContextId),
    #[error("sieves are not compatible between {sup} and {sub}")]
    IncompatibleSieves { sup: ContextId, sub: ContextId },
    #[error("the context poset is empty")]
    EmptyPoset,
    #[error("operator {0} does not lie in any context of the poset")]
    OperatorNotCovered(usize),
    #[error("section assigns operator {0} different values in different contexts")]
    InconsistentSection(usize),
    #[error("section is not compatible between contexts {sup} and {sub}")]
    IncompatibleSection { sup: ContextId, sub: ContextId },
    #[error("atom index {index} out of range for context {context}")]
    AtomOutOfRange { context: ContextId, index: usize },
}
