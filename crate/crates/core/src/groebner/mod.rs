//! Buchberger's algorithm with the Gebauer–Möller criteria, batched
//! multi-reduction, input interreduction, trace recording and exact trace
//! replay.

mod autoreduce;
mod buchberger;
mod pairs;
mod reduce;
mod reduced;
mod trace;

#[cfg(any(test, feature = "reference"))]
pub mod reference;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use autoreduce::autoreduce;
pub use buchberger::{buchberger, multi_reduce, replay_trace, BasisState, BasisStats, BuchbergerConfig, Selection};
pub use pairs::{CriticalPair, PairQueue};
pub use reduce::{reduce_full, s_polynomial, BasisElem};
pub use reduced::reduce_basis;
pub use trace::{Trace, TracePair, TraceReduction, TraceStep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error(transparent)]
    Arithmetic(#[from] AlgebraError),
    #[error("zero polynomial where a leading term is required")]
    ZeroPolynomial,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("trace does not match this system: {0}")]
    TraceMismatch(String),
}
