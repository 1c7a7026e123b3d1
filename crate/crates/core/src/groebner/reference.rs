//! Textbook Buchberger, used only as a test oracle: every pair is reduced,
//! no criteria, no batching, polynomial arithmetic through [`PolyRing`]
//! alone.

use std::cmp::Reverse;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BinaryHeap};

use crate::algebra::{Field, Monomial, PolyRing, Polynomial, Term};

fn lt<E: Clone>(p: &Polynomial<E>) -> Term<E> {
    p.lead().expect("nonzero").clone()
}

fn s_poly<F: Field>(ring: &PolyRing<F>, f: &Polynomial<F::Elem>, g: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
    let (a, b) = (lt(f), lt(g));
    let l = a.mono.lcm(&b.mono);
    let fa = ring.mul_term(f, &ring.field.inv(&a.coeff).unwrap(), &l.div(&a.mono).unwrap());
    let gb = ring.mul_term(g, &ring.field.inv(&b.coeff).unwrap(), &l.div(&b.mono).unwrap());
    ring.sub(&fa, &gb)
}

/// Multivariate division, dividing by the first applicable divisor.
pub fn normal_form<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F::Elem>,
    divisors: &[Polynomial<F::Elem>],
) -> Polynomial<F::Elem> {
    let key = |m: &Monomial| Reverse(ring.order.key(m));
    // pending terms, leading term first
    let mut p: BTreeMap<_, Term<F::Elem>> = f.terms().iter().map(|t| (key(&t.mono), t.clone())).collect();
    let mut rem = Vec::new();
    while let Some((_, t)) = p.pop_first() {
        let Some(g) = divisors.iter().find(|g| lt(g).mono.divides(&t.mono)) else {
            rem.push(t);
            continue;
        };
        let gt = lt(g);
        let q = ring.field.div(&t.coeff, &gt.coeff).unwrap();
        let m = t.mono.div(&gt.mono).unwrap();
        for s in &g.terms()[1..] {
            let mono = s.mono.mul(&m);
            let c = ring.field.mul(&q, &s.coeff);
            match p.entry(key(&mono)) {
                Entry::Vacant(e) => {
                    e.insert(Term {
                        coeff: ring.field.neg(&c),
                        mono,
                    });
                }
                Entry::Occupied(mut e) => {
                    let v = ring.field.sub(&e.get().coeff, &c);
                    if ring.field.is_zero(&v) {
                        e.remove();
                    } else {
                        e.get_mut().coeff = v;
                    }
                }
            }
        }
    }
    Polynomial::from_sorted_unchecked(rem)
}

/// All pairs, smallest lcm degree first and oldest first among equals;
/// returns every polynomial produced.
pub fn naive_buchberger<F: Field>(ring: &PolyRing<F>, system: &[Polynomial<F::Elem>]) -> Vec<Polynomial<F::Elem>> {
    let mut g: Vec<_> = system.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut pairs = BinaryHeap::new();
    let mut seq = 0usize;
    let mut push = |pairs: &mut BinaryHeap<_>, g: &[Polynomial<F::Elem>], i: usize, j: usize| {
        let degree = lt(&g[i]).mono.lcm(&lt(&g[j]).mono).degree();
        pairs.push(Reverse((degree, seq, i, j)));
        seq += 1;
    };
    for j in 0..g.len() {
        for i in 0..j {
            push(&mut pairs, &g, i, j);
        }
    }
    while let Some(Reverse((_, _, i, j))) = pairs.pop() {
        let r = normal_form(ring, &s_poly(ring, &g[i], &g[j]), &g);
        if !r.is_zero() {
            let k = g.len();
            g.push(ring.monic(&r).unwrap());
            for i in 0..k {
                push(&mut pairs, &g, i, k);
            }
        }
    }
    g
}

/// Reduced basis computed by the definition.
pub fn naive_reduce<F: Field>(ring: &PolyRing<F>, g: &[Polynomial<F::Elem>]) -> Vec<Polynomial<F::Elem>> {
    let mut keep: Vec<Polynomial<F::Elem>> = Vec::new();
    for p in g.iter().filter(|p| !p.is_zero()) {
        let m = lt(p).mono;
        if keep.iter().any(|q| lt(q).mono.divides(&m)) {
            continue;
        }
        keep.retain(|q| !m.divides(&lt(q).mono));
        keep.push(p.clone());
    }
    let mut out: Vec<_> = (0..keep.len())
        .map(|i| {
            let t = lt(&keep[i]);
            let tail = ring.sub(&keep[i], &ring.monomial(t.coeff.clone(), t.mono));
            let others: Vec<_> = keep
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            let r = ring.add(&ring.monomial(t.coeff, t.mono), &normal_form(ring, &tail, &others));
            ring.monic(&r).unwrap()
        })
        .collect();
    out.sort_by(|a, b| ring.order.compare(&lt(b).mono, &lt(a).mono));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Fp, Monomial, MonomialOrder, PrimeField};
    use crate::groebner::{buchberger, reduce_basis, BuchbergerConfig};
    use proptest::prelude::*;

    fn random_system(raw: &[Vec<(i64, [u8; 3])>]) -> (PolyRing<PrimeField>, Vec<Polynomial<Fp>>) {
        let ring = PolyRing::new(PrimeField::new(), MonomialOrder::grevlex());
        let sys = raw
            .iter()
            .map(|terms| {
                ring.from_terms(terms.iter().map(|&(c, e)| {
                    let mut ex = [0u8; 10];
                    ex[..3].copy_from_slice(&e);
                    Term {
                        coeff: Fp::from_i64(c),
                        mono: Monomial::from_array(ex),
                    }
                }))
            })
            .collect();
        (ring, sys)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn criteria_do_not_change_the_reduced_basis(
            raw in prop::collection::vec(
                prop::collection::vec((-5i64..=5, prop::array::uniform3(0u8..=2)), 1..4),
                1..4,
            )
        ) {
            let (ring, sys) = random_system(&raw);
            let fast = buchberger(&ring, sys.clone(), &BuchbergerConfig::default(), None).unwrap();
            let fast: Vec<_> = fast.into_polynomials();
            let ours = reduce_basis(&ring, &fast).unwrap();
            let theirs = naive_reduce(&ring, &naive_buchberger(&ring, &sys));
            prop_assert_eq!(ours, theirs);
        }
    }
}
