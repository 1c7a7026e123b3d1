use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::GroebnerError;
use crate::algebra::{Field, Monomial, PolyRing, Polynomial, Term};

/// A basis polynomial together with the inverse of its leading coefficient.
#[derive(Clone, Debug)]
pub struct BasisElem<E> {
    pub poly: Polynomial<E>,
    pub(crate) lead_inv: E,
}

impl<E: Clone> BasisElem<E> {
    pub(crate) fn new<F: Field<Elem = E>>(
        ring: &PolyRing<F>,
        poly: Polynomial<E>,
    ) -> Result<BasisElem<E>, GroebnerError> {
        let lead = poly.lead().ok_or(GroebnerError::ZeroPolynomial)?;
        let lead_inv = ring.field.inv(&lead.coeff)?;
        Ok(BasisElem { poly, lead_inv })
    }

    pub fn lead_mono(&self) -> &Monomial {
        &self.poly.terms()[0].mono
    }
}

/// Where reduction steps take their reductors from.
pub(crate) enum Reductors<'a> {
    /// Pick the first candidate whose leading monomial divides the current
    /// term; optionally record the choice.
    Search {
        candidates: &'a [usize],
        record: Option<&'a mut Vec<u32>>,
    },
    /// Use exactly the recorded sequence.
    Replay { sequence: &'a [u32] },
}

/// Orders candidate reductors: oldest first. Older elements tend to have
/// lower degree, and the order does not depend on coefficients.
pub(crate) fn rank_candidates(ids: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut ids: Vec<usize> = ids.into_iter().collect();
    ids.sort_unstable();
    ids
}

/// Full reduction of `f`: repeatedly takes the largest remaining term and
/// either cancels it with a reductor or moves it to the remainder.
pub(crate) fn reduce_terms<F: Field>(
    ring: &PolyRing<F>,
    f: Polynomial<F::Elem>,
    basis: &[BasisElem<F::Elem>],
    mut source: Reductors<'_>,
) -> Result<Polynomial<F::Elem>, GroebnerError> {
    let field = &ring.field;
    let order = &ring.order;
    let mut acc: BTreeMap<u128, Term<F::Elem>> = f
        .into_terms()
        .into_iter()
        .map(|t| (order.key(&t.mono), t))
        .collect();
    let mut remainder = Vec::new();
    let mut replay_pos = 0usize;

    while let Some((_, term)) = acc.pop_last() {
        let chosen = match &mut source {
            Reductors::Search { candidates, record } => {
                let hit = candidates
                    .iter()
                    .copied()
                    .find(|&i| basis[i].lead_mono().divides(&term.mono));
                if let (Some(i), Some(rec)) = (hit, record.as_deref_mut()) {
                    rec.push(i as u32);
                }
                hit
            }
            Reductors::Replay { sequence } => match sequence.get(replay_pos) {
                Some(&i) => {
                    let elem = basis.get(i as usize).ok_or_else(|| {
                        GroebnerError::TraceMismatch(format!("reductor {i} does not exist yet"))
                    })?;
                    if elem.lead_mono().divides(&term.mono) {
                        replay_pos += 1;
                        Some(i as usize)
                    } else {
                        None
                    }
                }
                None => None,
            },
        };
        let Some(r) = chosen else {
            remainder.push(term);
            continue;
        };
        let g = &basis[r];
        let q = field.mul(&term.coeff, &g.lead_inv);
        let shift = term
            .mono
            .div(g.lead_mono())
            .expect("reductor leading monomial divides the term");
        for gt in &g.poly.terms()[1..] {
            let mono = gt.mono.mul(&shift);
            match acc.entry(order.key(&mono)) {
                Entry::Occupied(mut e) => {
                    field.sub_mul_assign(&mut e.get_mut().coeff, &q, &gt.coeff);
                    if field.is_zero(&e.get().coeff) {
                        e.remove();
                    }
                }
                Entry::Vacant(e) => {
                    let coeff = field.neg(&field.mul(&q, &gt.coeff));
                    if !field.is_zero(&coeff) {
                        e.insert(Term { coeff, mono });
                    }
                }
            }
        }
    }
    if let Reductors::Replay { sequence } = source {
        if replay_pos != sequence.len() {
            return Err(GroebnerError::TraceMismatch(format!(
                "used {replay_pos} of {} recorded reductors",
                sequence.len()
            )));
        }
    }
    Ok(Polynomial::from_sorted_unchecked(remainder))
}

/// `S(f, g) = (x^γ / LT(f)) f - (x^γ / LT(g)) g` with `x^γ = lcm(LM f, LM g)`.
///
/// The cancelling leading terms are dropped by construction rather than
/// computed, so the result is exact in its support for every field.
pub fn s_polynomial<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F::Elem>,
    g: &Polynomial<F::Elem>,
) -> Result<Polynomial<F::Elem>, GroebnerError> {
    let fe = BasisElem::new(ring, f.clone())?;
    let ge = BasisElem::new(ring, g.clone())?;
    Ok(s_poly_elems(ring, &fe, &ge))
}

pub(crate) fn s_poly_elems<F: Field>(
    ring: &PolyRing<F>,
    f: &BasisElem<F::Elem>,
    g: &BasisElem<F::Elem>,
) -> Polynomial<F::Elem> {
    let lcm = f.lead_mono().lcm(g.lead_mono());
    let mf = lcm.div(f.lead_mono()).unwrap();
    let mg = lcm.div(g.lead_mono()).unwrap();
    let tail = |p: &Polynomial<F::Elem>| Polynomial::from_sorted_unchecked(p.terms()[1..].to_vec());
    let a = ring.mul_term(&tail(&f.poly), &f.lead_inv, &mf);
    let b = ring.mul_term(&tail(&g.poly), &g.lead_inv, &mg);
    ring.sub(&a, &b)
}

/// Normal form of `f` modulo `divisors`: no monomial of the result is
/// divisible by any leading monomial of `divisors`.
pub fn reduce_full<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F::Elem>,
    divisors: &[Polynomial<F::Elem>],
) -> Result<Polynomial<F::Elem>, GroebnerError> {
    let basis = divisors
        .iter()
        .map(|g| BasisElem::new(ring, g.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let candidates = rank_candidates(0..basis.len());
    reduce_terms(
        ring,
        f.clone(),
        &basis,
        Reductors::Search {
            candidates: &candidates,
            record: None,
        },
    )
}
