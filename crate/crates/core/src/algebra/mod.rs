//! Sparse multivariate polynomials in `h1..h10` over pluggable coefficient
//! fields: the prime field `Z_p` for exact templates and binary big floats
//! for replay.

mod bigfloat;
mod field;
mod monomial;
mod poly;
mod prime;
pub mod text;

use thiserror::Error;

pub use bigfloat::{BigFloat, FloatField};
pub use field::{Field, FieldTag};
pub use monomial::{Monomial, MonomialOrder, OrderKind, DEFAULT_RANKING, NATURAL_RANKING, NVARS};
pub use poly::{PolyRing, Polynomial, Term};
pub use prime::{is_prime_u64, Fp, PrimeField, MODULUS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("division by a zero floating point coefficient")]
    DivisionByZeroCoefficient,
    #[error("exponent exceeds 255")]
    ExponentOverflow,
    #[error("parse error: {0}")]
    Parse(String),
}
