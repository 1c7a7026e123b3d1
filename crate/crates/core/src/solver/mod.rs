//! Template solvers: a Groebner basis trace recorded once over `Z_p` on
//! integer data, replayed on float data in lockstep with the template, and
//! the four homographies read off the reduced basis.

mod extract;
mod lockstep;
mod replay;
mod shape;
mod solve;
mod template;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::groebner::GroebnerError;
use crate::text::FormatError;
use crate::upgrade::UpgradeError;

pub use extract::{extract_solutions, SignedSolution, UpgradeSolution};
pub use lockstep::{exact_part, float_part, LockstepField, Paired};
pub use replay::{replay, replay_lockstep};
pub use shape::{basis_shape, match_shape, SHAPE_LEN};
pub use solve::{default_precision, solve, Outcome, PatternMatch, LENGTH_TOLERANCE};
pub use template::{build_template, SolverTemplate, TemplateStats, TEMPLATE_HEADER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("degenerate template: {0}")]
    DegenerateTemplate(String),
    #[error("monomial supports diverge: {0}")]
    SupportMismatch(String),
    #[error("division by a zero float coefficient")]
    ZeroDivision,
    #[error("reduced basis has the wrong shape: {0}")]
    ShapeMismatch(String),
    #[error("no real solution: {0}")]
    NoRealSolution(String),
    #[error("trace does not fit: {0}")]
    TraceMismatch(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Groebner(GroebnerError),
    #[error(transparent)]
    Upgrade(#[from] UpgradeError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl From<GroebnerError> for SolverError {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::Arithmetic(AlgebraError::DivisionByZeroCoefficient) => SolverError::ZeroDivision,
            GroebnerError::TraceMismatch(m) => SolverError::TraceMismatch(m),
            e => SolverError::Groebner(e),
        }
    }
}

impl From<AlgebraError> for SolverError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::DivisionByZeroCoefficient => SolverError::ZeroDivision,
            e => SolverError::Groebner(GroebnerError::Arithmetic(e)),
        }
    }
}
