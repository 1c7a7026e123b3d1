//! Euclidean upgrade of a projective reconstruction from segments of known
//! length.
//!
//! The upgrading homography is parametrized by ten unknowns `h1..h10`; each
//! segment contributes a quartic constraint. The resulting system is solved
//! with a Groebner basis computed once over `Z_p` on integer template data,
//! recorded as a trace, and replayed in lockstep on big-float data with
//! zero-propagation from the exact side.

pub mod algebra;
pub mod datagen;
pub mod groebner;
pub mod text;
pub mod solver;
pub mod upgrade;

pub use algebra::{BigFloat, Field, FloatField, Fp, Monomial, MonomialOrder, PolyRing, Polynomial, PrimeField};
