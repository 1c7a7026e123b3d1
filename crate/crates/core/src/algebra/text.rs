//! Textual polynomial serialization.
//!
//! ```text
//! polys v1
//! field zp 332251314113
//! order grevlex:h2,h3,h8,h9,h7,h1,h4,h5,h6,h10
//! count 2
//! poly 3
//! 1 2 0 0 0 0 0 0 0 0 0
//! ...
//! ```
//!
//! Each term line is the coefficient followed by the ten exponents. Prime
//! field coefficients are canonical residues; float coefficients are exact
//! decimal expansions, so both round-trip bit for bit.

use std::fmt::Write as _;

use super::field::{Field, FieldTag};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{PolyRing, Polynomial, Term};
use crate::text::{FormatError, Lines};

pub const POLYS_HEADER: &str = "polys";
pub const POLYS_VERSION: &str = "v1";

pub fn write_poly<F: Field>(ring: &PolyRing<F>, p: &Polynomial<F::Elem>, out: &mut String) {
    let _ = writeln!(out, "poly {}", p.len());
    for t in p.terms() {
        out.push_str(&ring.field.format(&t.coeff));
        for e in t.mono.exponents() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
}

pub fn read_poly<F: Field>(
    ring: &PolyRing<F>,
    lines: &mut Lines<'_>,
) -> Result<Polynomial<F::Elem>, FormatError> {
    let n = lines.expect_count("poly")?;
    let mut terms = Vec::with_capacity(n);
    for _ in 0..n {
        let f = lines.next_fields()?;
        if f.len() != 11 {
            return Err(lines.error(format!("term needs 11 fields, got {}", f.len())));
        }
        let coeff = ring
            .field
            .parse(f[0])
            .map_err(|e| lines.error(e.to_string()))?;
        let exps: Vec<u32> = f[1..]
            .iter()
            .map(|s| lines.parse(s))
            .collect::<Result<_, _>>()?;
        let mono = Monomial::from_exponents(&exps).map_err(|e| lines.error(e.to_string()))?;
        terms.push(Term { coeff, mono });
    }
    let p = Polynomial::from_sorted_unchecked(terms);
    if !ring.is_canonical(&p) {
        return Err(lines.error("terms are not strictly decreasing with nonzero coefficients"));
    }
    Ok(p)
}

pub fn write_field_and_order<F: Field>(ring: &PolyRing<F>, out: &mut String) {
    let _ = writeln!(out, "field {}", ring.field.tag());
    let _ = writeln!(out, "order {}", ring.order);
}

pub fn read_field_tag(lines: &mut Lines<'_>) -> Result<FieldTag, FormatError> {
    let f = lines.expect("field")?;
    match f.as_slice() {
        ["zp", m] => Ok(FieldTag::Prime {
            modulus: lines.parse(m)?,
        }),
        ["float", p] => Ok(FieldTag::Float {
            precision_bits: lines.parse(p)?,
        }),
        _ => Err(lines.error("field must be `zp <modulus>` or `float <bits>`")),
    }
}

pub fn read_order(lines: &mut Lines<'_>) -> Result<MonomialOrder, FormatError> {
    let f = lines.expect("order")?;
    match f.as_slice() {
        [o] => o.parse().map_err(|e: super::AlgebraError| lines.error(e.to_string())),
        _ => Err(lines.error("`order` takes one argument")),
    }
}

/// Serializes a list of polynomials with a self-describing header.
pub fn encode_polys<F: Field>(ring: &PolyRing<F>, polys: &[Polynomial<F::Elem>]) -> String {
    let mut out = format!("{POLYS_HEADER} {POLYS_VERSION}\n");
    write_field_and_order(ring, &mut out);
    let _ = writeln!(out, "count {}", polys.len());
    for p in polys {
        write_poly(ring, p, &mut out);
    }
    out
}

/// Parses [`encode_polys`] output. The header must agree with `ring`'s field.
pub fn decode_polys<F: Field>(
    ring: &PolyRing<F>,
    text: &str,
) -> Result<Vec<Polynomial<F::Elem>>, FormatError> {
    let mut lines = Lines::new(text);
    let header = lines.expect(POLYS_HEADER)?;
    if header != [POLYS_VERSION] {
        return Err(lines.error(format!("unsupported version {header:?}")));
    }
    let tag = read_field_tag(&mut lines)?;
    if tag != ring.field.tag() {
        return Err(lines.error(format!(
            "field mismatch: file has `{tag}`, expected `{}`",
            ring.field.tag()
        )));
    }
    let order = read_order(&mut lines)?;
    if order != ring.order {
        return Err(lines.error(format!("order mismatch: file has `{order}`")));
    }
    let n = lines.expect_count("count")?;
    let polys = (0..n)
        .map(|_| read_poly(ring, &mut lines))
        .collect::<Result<Vec<_>, _>>()?;
    lines.finish()?;
    Ok(polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BigFloat, FloatField, Fp, PrimeField};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn prime_field_round_trip(raw in prop::collection::vec((any::<u64>(), prop::array::uniform10(0u8..4)), 0..20)) {
            let ring = PolyRing::new(PrimeField::new(), MonomialOrder::grevlex());
            let p = ring.from_terms(raw.iter().map(|&(c, e)| Term { coeff: Fp::new(c), mono: Monomial::from_array(e) }));
            let polys = vec![p.clone(), Polynomial::zero(), p];
            let text = encode_polys(&ring, &polys);
            prop_assert_eq!(decode_polys(&ring, &text).unwrap(), polys);
        }

        #[test]
        fn float_round_trip(raw in prop::collection::vec((-1e9f64..1e9, -300i32..300, prop::array::uniform10(0u8..4)), 0..10)) {
            let field = FloatField::new(300);
            let ring = PolyRing::new(field, MonomialOrder::lex());
            let third = BigFloat::one(300).div(&BigFloat::from_i64(3, 300)).unwrap();
            let p = ring.from_terms(raw.iter().map(|&(c, s, e)| Term {
                coeff: BigFloat::from_f64(c * 2f64.powi(s), 300).mul(&third),
                mono: Monomial::from_array(e),
            }));
            let text = encode_polys(&ring, std::slice::from_ref(&p));
            prop_assert_eq!(decode_polys(&ring, &text).unwrap(), vec![p]);
        }
    }

    #[test]
    fn header_mismatches_are_rejected() {
        let zp = PolyRing::new(PrimeField::new(), MonomialOrder::grevlex());
        let text = encode_polys(&zp, &[zp.var(0)]);
        let fl = PolyRing::new(FloatField::new(64), MonomialOrder::grevlex());
        assert!(decode_polys(&fl, &text).is_err());
        let lex = PolyRing::new(PrimeField::new(), MonomialOrder::lex());
        assert!(decode_polys(&lex, &text).is_err());
        let unsorted = text.replace("count 1\npoly 1", "count 1\npoly 2\n1 0 0 0 0 0 0 0 0 0 0");
        assert!(decode_polys(&zp, &unsorted).is_err());
    }
}
