//! Exact rational scalars, matrices and finite matrix groups.
//!
//! Nothing in here touches floating point: entries are arbitrary-precision rationals in
//! lowest terms, so equality and hashing are exact.

mod group;
pub mod linalg;
mod matrix;
pub mod rational;

pub use group::{FiniteMatrixGroup, DEFAULT_MAX_GROUP_SIZE};
pub use matrix::MatQ;
pub use rational::{format_rational, parse_rational, Rational};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("group closure exceeded {limit} elements")]
    GroupTooLarge { limit: usize },
    #[error("generator {index} is singular")]
    SingularGenerator { index: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("invalid rational {0:?}")]
    BadRational(String),
}

/// Closes `generators` into a finite group; see [`FiniteMatrixGroup::close`].
pub fn close_group(
    dim: usize,
    generators: &[MatQ],
    max_size: usize,
) -> Result<FiniteMatrixGroup, ExactError> {
    FiniteMatrixGroup::close(dim, generators, max_size)
}

pub fn mat_inverse(m: &MatQ) -> Result<MatQ, ExactError> {
    m.inverse()
}

/// Vector of rationals from integers.
pub fn qvec(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rational::int(x)).collect()
}
