use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("not self-injective: {0}")]
    NotSelfInjectiveLike(String),
    #[error("no isomorphism witness for class {class}, copy {copy}")]
    WitnessNotFound { class: usize, copy: usize },
    #[error("not Frobenius: {0}")]
    NotFrobenius(String),
    #[error("Gram matrix of the functional is singular")]
    SingularGram,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("algebra is not basic (class {class} has multiplicity {multiplicity})")]
    NotBasic { class: usize, multiplicity: usize },
    #[error("element is not supported in the block {target}<-{source_class}")]
    BlockMismatch { source_class: usize, target: usize },
    #[error("tensor has a term outside the allowed block support ({0})")]
    BadBlockSupport(String),
    #[error("S({class}) is not the graph of a bijection")]
    NotBijection { class: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
