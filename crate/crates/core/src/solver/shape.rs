use crate::algebra::{Monomial, Polynomial};

pub const SHAPE_LEN: usize = 13;

/// The supports `(head, tail)` of the thirteen two-term polynomials
/// `g1..g13` of the expected reduced basis:
///
/// ```text
/// g1..g6   h1 h2 h3 h7 h8 h9 | 1
/// g7       h4                | h5
/// g8..g10  h5² h6² h10²      | 1
/// g11      h5 h6             | h10
/// g12      h5 h10            | h6
/// g13      h6 h10            | h5
/// ```
///
/// The head is the monomial the solution is read from, which is not
/// necessarily the leading one under the chosen order.
pub fn basis_shape() -> [(Monomial, Monomial); SHAPE_LEN] {
    let v = Monomial::var;
    let p = Monomial::product;
    let one = Monomial::ONE;
    [
        (v(0), one),
        (v(1), one),
        (v(2), one),
        (v(6), one),
        (v(7), one),
        (v(8), one),
        (v(3), v(4)),
        (p(&[4, 4]), one),
        (p(&[5, 5]), one),
        (p(&[9, 9]), one),
        (p(&[4, 5]), v(9)),
        (p(&[4, 9]), v(5)),
        (p(&[5, 9]), v(4)),
    ]
}

/// For each `g_k` the position in `basis` of the polynomial with that
/// support. Fails unless the basis consists of exactly these thirteen.
pub fn match_shape<E>(basis: &[Polynomial<E>]) -> Result<[usize; SHAPE_LEN], String> {
    if basis.len() != SHAPE_LEN {
        return Err(format!("{} polynomials, expected {SHAPE_LEN}", basis.len()));
    }
    let mut found = [usize::MAX; SHAPE_LEN];
    for (pos, p) in basis.iter().enumerate() {
        let monos: Vec<&Monomial> = p.monomials().collect();
        let k = basis_shape()
            .iter()
            .position(|(a, b)| monos.len() == 2 && monos.contains(&a) && monos.contains(&b));
        match k {
            Some(k) if found[k] == usize::MAX => found[k] = pos,
            Some(k) => return Err(format!("two polynomials have the support of g{}", k + 1)),
            None => {
                let s: Vec<String> = p.monomials().map(|m| m.to_string()).collect();
                return Err(format!("unexpected support {{{}}}", s.join(", ")));
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, MonomialOrder, PolyRing, PrimeField, Term};

    fn shaped(ring: &PolyRing<PrimeField>) -> Vec<Polynomial<Fp>> {
        basis_shape()
            .iter()
            .map(|(a, b)| {
                ring.from_terms([
                    Term { coeff: Fp::ONE, mono: *a },
                    Term { coeff: Fp::new(5), mono: *b },
                ])
            })
            .collect()
    }

    #[test]
    fn matches_in_any_order() {
        let r = PolyRing::new(PrimeField::new(), MonomialOrder::grevlex());
        let mut g = shaped(&r);
        g.reverse();
        let idx = match_shape(&g).unwrap();
        assert_eq!(idx[0], 12);
        assert_eq!(idx[12], 0);
    }

    #[test]
    fn rejects_other_supports() {
        let r = PolyRing::new(PrimeField::new(), MonomialOrder::grevlex());
        let mut g = shaped(&r);
        assert!(match_shape(&g[..12]).is_err());
        g[7] = r.from_terms([Term { coeff: Fp::ONE, mono: Monomial::product(&[4, 4]) }]);
        assert!(match_shape(&g).is_err());
        g[7] = g[8].clone();
        assert!(match_shape(&g).unwrap_err().contains("two"));
    }
}
