use std::fmt;

use super::AlgebraError;

/// Identifies a coefficient field in serialized headers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldTag {
    Prime { modulus: u64 },
    Float { precision_bits: u32 },
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Prime { modulus } => write!(f, "zp {modulus}"),
            FieldTag::Float { precision_bits } => write!(f, "float {precision_bits}"),
        }
    }
}

/// A coefficient field, used as a context object: elements carry no field
/// parameters themselves, so one polynomial engine serves the prime field,
/// big floats and the paired lockstep field alike.
///
/// Control flow in the Groebner code depends only on [`Field::is_zero`];
/// coefficient values are never compared against thresholds.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, AlgebraError>;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, AlgebraError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `acc -= a * b`.
    fn sub_mul_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.sub(acc, &self.mul(a, b));
    }

    /// Factor applied to a polynomial whose leading coefficient is `lc` when
    /// it joins a Groebner basis. Defaults to full normalization.
    fn insertion_scale(&self, lc: &Self::Elem) -> Result<Self::Elem, AlgebraError> {
        self.inv(lc)
    }

    /// Hash of the exact part of an element, if the field has one.
    fn fingerprint(&self, _a: &Self::Elem) -> Option<u64> {
        None
    }

    /// Converts a decimal literal (as stored in instance files) into the
    /// field. Defaults to [`Field::parse`].
    fn from_decimal(&self, s: &str) -> Result<Self::Elem, AlgebraError> {
        self.parse(s)
    }

    fn tag(&self) -> FieldTag;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, AlgebraError>;
}
