//! Exact structure theory of finite-dimensional self-injective algebras:
//! canonical decomposition, Nakayama permutation, basic reduction, Frobenius
//! pairs, and the family of invariant coassociative comultiplications
//! obtained by spreading a Frobenius tensor over an amplified algebra.

pub mod algebra;
pub mod amplify;
pub mod error;
pub mod families;
pub mod frobenius;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod poly;
pub mod scalar;
pub mod structure;
pub mod tensor;

pub use algebra::{Element, FinDimAlgebra, Functional};
pub use amplify::{AmplifiedAlgebra, BlockKey, ComultiplicationReport, Preset, SpreadSpec};
pub use error::{Error, Result};
pub use frobenius::FrobeniusPair;
pub use io::AnyAlgebra;
pub use pipeline::{analyze, prepare, verify_algebra, verify_corpus, Prepared, DEFAULT_SEED};
pub use scalar::{BigFp, FieldSpec, Fp, Rational};
pub use structure::{CanonicalDecomposition, NakayamaData};
pub use tensor::{Tensor2, Tensor3};

pub type QAlgebra = FinDimAlgebra<Rational>;
pub type FpAlgebra = FinDimAlgebra<Fp>;
pub type QElement = Element<Rational>;
pub type FpElement = Element<Fp>;
pub type QTensor = Tensor2<Rational>;
pub type FpTensor = Tensor2<Fp>;
