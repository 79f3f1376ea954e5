//! Exact arithmetic: cyclotomic scalars and Künneth-type graded-commutative
//! algebras with their monomial bases.

mod cyclotomic;
mod kunneth;
mod root;

pub use cyclotomic::{cyclotomic_polynomial, totient, Cyclotomic};
pub use kunneth::{AlgebraElement, GeneratorSpec, KunnethAlgebra, Monomial};
pub use root::RootOfUnity;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements live in different algebras")]
    IncompatibleAlgebras,
    #[error("invalid generator `{0}`: {1}")]
    InvalidGenerator(String, &'static str),
    #[error("no generator named `{0}`")]
    UnknownGenerator(String),
}
