use crate::algebra::{AlgebraError, BigFloat, Field, FieldTag, FloatField, Fp, PolyRing, Polynomial, PrimeField, Term};

/// A template coefficient and the float coefficient at the same position.
#[derive(Clone, Debug, PartialEq)]
pub struct Paired {
    pub exact: Fp,
    pub approx: BigFloat,
}

/// Runs the template and the float system as one computation. Every
/// decision, including whether a coefficient is zero, is taken from the
/// exact side; the float side follows along. A term whose template
/// coefficient cancels is dropped on both sides, which is the forced
/// zeroing of the float coefficient. A float coefficient that merely
/// becomes small is kept.
#[derive(Clone, Debug)]
pub struct LockstepField {
    exact: PrimeField,
    approx: FloatField,
}

impl LockstepField {
    pub fn new(precision_bits: u32) -> LockstepField {
        LockstepField {
            exact: PrimeField::new(),
            approx: FloatField::new(precision_bits),
        }
    }

    pub fn precision_bits(&self) -> u32 {
        self.approx.precision_bits
    }

    pub fn float_field(&self) -> &FloatField {
        &self.approx
    }
}

impl Field for LockstepField {
    type Elem = Paired;

    fn zero(&self) -> Paired {
        Paired {
            exact: Fp::ZERO,
            approx: self.approx.zero(),
        }
    }

    fn one(&self) -> Paired {
        Paired {
            exact: Fp::ONE,
            approx: self.approx.one(),
        }
    }

    fn from_i64(&self, v: i64) -> Paired {
        Paired {
            exact: Fp::from_i64(v),
            approx: self.approx.from_i64(v),
        }
    }

    fn is_zero(&self, a: &Paired) -> bool {
        a.exact.is_zero()
    }

    fn add(&self, a: &Paired, b: &Paired) -> Paired {
        Paired {
            exact: a.exact + b.exact,
            approx: a.approx.add(&b.approx),
        }
    }

    fn sub(&self, a: &Paired, b: &Paired) -> Paired {
        Paired {
            exact: a.exact - b.exact,
            approx: a.approx.sub(&b.approx),
        }
    }

    fn mul(&self, a: &Paired, b: &Paired) -> Paired {
        Paired {
            exact: a.exact * b.exact,
            approx: a.approx.mul(&b.approx),
        }
    }

    fn neg(&self, a: &Paired) -> Paired {
        Paired {
            exact: -a.exact,
            approx: a.approx.neg(),
        }
    }

    fn inv(&self, a: &Paired) -> Result<Paired, AlgebraError> {
        Ok(Paired {
            exact: a.exact.inverse()?,
            approx: a.approx.recip()?,
        })
    }

    fn equal(&self, a: &Paired, b: &Paired) -> bool {
        a == b
    }

    /// The template side is made monic as in the original run; the float
    /// side is left as it is.
    fn insertion_scale(&self, lc: &Paired) -> Result<Paired, AlgebraError> {
        Ok(Paired {
            exact: lc.exact.inverse()?,
            approx: self.approx.one(),
        })
    }

    fn fingerprint(&self, a: &Paired) -> Option<u64> {
        Some(a.exact.value())
    }

    fn tag(&self) -> FieldTag {
        self.approx.tag()
    }

    fn format(&self, a: &Paired) -> String {
        format!("{}|{}", a.exact.value(), self.approx.format(&a.approx))
    }

    fn parse(&self, s: &str) -> Result<Paired, AlgebraError> {
        let (e, f) = s
            .split_once('|')
            .ok_or_else(|| AlgebraError::Parse(format!("expected `exact|float`, got {s:?}")))?;
        Ok(Paired {
            exact: self.exact.parse(e)?,
            approx: self.approx.parse(f)?,
        })
    }
}

/// Zips a template polynomial with a float polynomial of identical support.
/// Returns `None` if the supports differ.
pub(crate) fn pair_polynomial(
    template: &Polynomial<Fp>,
    float: &Polynomial<BigFloat>,
) -> Option<Polynomial<Paired>> {
    if template.len() != float.len() {
        return None;
    }
    let mut terms = Vec::with_capacity(template.len());
    for (t, f) in template.terms().iter().zip(float.terms()) {
        if t.mono != f.mono {
            return None;
        }
        terms.push(Term {
            coeff: Paired {
                exact: t.coeff,
                approx: f.coeff.clone(),
            },
            mono: t.mono,
        });
    }
    Some(Polynomial::from_sorted_unchecked(terms))
}

/// The float half of a paired polynomial. Terms whose float coefficient is
/// exactly zero are dropped.
pub fn float_part(ring: &PolyRing<FloatField>, p: &Polynomial<Paired>) -> Polynomial<BigFloat> {
    ring.from_terms(p.terms().iter().map(|t| Term {
        coeff: t.coeff.approx.clone(),
        mono: t.mono,
    }))
}

/// The template half of a paired polynomial.
pub fn exact_part(p: &Polynomial<Paired>) -> Polynomial<Fp> {
    Polynomial::from_sorted_unchecked(
        p.terms()
            .iter()
            .map(|t| Term {
                coeff: t.coeff.exact,
                mono: t.mono,
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(e: i64, f: f64) -> Paired {
        Paired {
            exact: Fp::from_i64(e),
            approx: BigFloat::from_f64(f, 64),
        }
    }

    #[test]
    fn zero_is_decided_by_the_template() {
        let k = LockstepField::new(64);
        let a = p(3, 3.0000001);
        let b = p(3, 3.0);
        let d = k.sub(&a, &b);
        assert!(k.is_zero(&d));
        assert!(!d.approx.is_zero());
        // Float zero with a nonzero template value is not zero.
        assert!(!k.is_zero(&p(1, 0.0)));
    }

    #[test]
    fn inverting_a_float_zero_is_the_failure_mode() {
        let k = LockstepField::new(64);
        assert_eq!(k.inv(&p(5, 0.0)), Err(AlgebraError::DivisionByZeroCoefficient));
        assert!(k.inv(&p(0, 1.0)).is_err());
    }

    #[test]
    fn insertion_leaves_the_float_side_unscaled() {
        let k = LockstepField::new(64);
        let s = k.insertion_scale(&p(4, 4.5)).unwrap();
        assert_eq!(s.exact * Fp::from_i64(4), Fp::ONE);
        assert_eq!(s.approx, BigFloat::one(64));
    }

    #[test]
    fn text_round_trip() {
        let k = LockstepField::new(64);
        let a = p(-7, 0.1);
        assert_eq!(k.parse(&k.format(&a)).unwrap(), a);
    }
}
