use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder, NVARS};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct Term<E> {
    pub coeff: E,
    pub mono: Monomial,
}

/// Sparse polynomial: terms with nonzero coefficients, strictly decreasing
/// in the monomial order of the [`PolyRing`] that built it.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<E> {
    terms: Vec<Term<E>>,
}

impl<E> Polynomial<E> {
    pub fn zero() -> Polynomial<E> {
        Polynomial { terms: Vec::new() }
    }

    /// Wraps terms that are already canonical. Checked in debug builds by callers
    /// through [`PolyRing::is_canonical`].
    pub(crate) fn from_sorted_unchecked(terms: Vec<Term<E>>) -> Polynomial<E> {
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term<E>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<E>> {
        self.terms
    }

    pub fn lead(&self) -> Option<&Term<E>> {
        self.terms.first()
    }

    pub fn lead_mono(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn total_degree(&self) -> Option<u16> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter().map(|t| &t.mono)
    }

    /// Coefficient-wise map; the caller guarantees that zeros map to zeros
    /// and nonzeros to nonzeros.
    pub fn map_coeffs<T>(&self, mut f: impl FnMut(&E) -> T) -> Polynomial<T> {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f(&t.coeff),
                    mono: t.mono,
                })
                .collect(),
        }
    }

    pub fn coeff_of(&self, m: &Monomial) -> Option<&E> {
        self.terms.iter().find(|t| t.mono == *m).map(|t| &t.coeff)
    }
}

impl<E: fmt::Display> fmt::Display for Polynomial<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.mono.is_one() {
                write!(f, "{}", t.coeff)?;
            } else {
                write!(f, "({})*{}", t.coeff, t.mono)?;
            }
        }
        Ok(())
    }
}

/// Polynomial arithmetic over a coefficient field under a fixed monomial order.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, order: MonomialOrder) -> PolyRing<F> {
        PolyRing { field, order }
    }

    pub fn constant(&self, c: F::Elem) -> Polynomial<F::Elem> {
        self.monomial(c, Monomial::ONE)
    }

    pub fn monomial(&self, c: F::Elem, mono: Monomial) -> Polynomial<F::Elem> {
        if self.field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: vec![Term { coeff: c, mono }],
            }
        }
    }

    pub fn var(&self, index: usize) -> Polynomial<F::Elem> {
        self.monomial(self.field.one(), Monomial::var(index))
    }

    /// Sorts, merges duplicate monomials and drops zero coefficients.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = Term<F::Elem>>) -> Polynomial<F::Elem> {
        let mut acc: BTreeMap<u128, Term<F::Elem>> = BTreeMap::new();
        for t in terms {
            let key = self.order.key(&t.mono);
            match acc.get_mut(&key) {
                Some(existing) => {
                    existing.coeff = self.field.add(&existing.coeff, &t.coeff);
                }
                None => {
                    acc.insert(key, t);
                }
            }
        }
        let f = &self.field;
        Polynomial {
            terms: acc
                .into_values()
                .rev()
                .filter(|t| !f.is_zero(&t.coeff))
                .collect(),
        }
    }

    /// Re-sorts a polynomial built under a different order.
    pub fn reorder(&self, p: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        self.from_terms(p.terms.iter().cloned())
    }

    pub fn is_canonical(&self, p: &Polynomial<F::Elem>) -> bool {
        p.terms.iter().all(|t| !self.field.is_zero(&t.coeff))
            && p
                .terms
                .windows(2)
                .all(|w| self.order.compare(&w[0].mono, &w[1].mono) == Ordering::Greater)
    }

    fn merge(
        &self,
        f: &Polynomial<F::Elem>,
        g: &Polynomial<F::Elem>,
        combine: impl Fn(&F::Elem, &F::Elem) -> F::Elem,
        only_g: impl Fn(&F::Elem) -> F::Elem,
    ) -> Polynomial<F::Elem> {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            let (a, b) = (&f.terms[i], &g.terms[j]);
            match self.order.compare(&a.mono, &b.mono) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        coeff: only_g(&b.coeff),
                        mono: b.mono,
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = combine(&a.coeff, &b.coeff);
                    if !self.field.is_zero(&c) {
                        out.push(Term { coeff: c, mono: a.mono });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(f.terms[i..].iter().cloned());
        out.extend(g.terms[j..].iter().map(|b| Term {
            coeff: only_g(&b.coeff),
            mono: b.mono,
        }));
        Polynomial { terms: out }
    }

    pub fn add(&self, f: &Polynomial<F::Elem>, g: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        self.merge(f, g, |a, b| self.field.add(a, b), |b| b.clone())
    }

    pub fn sub(&self, f: &Polynomial<F::Elem>, g: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        self.merge(f, g, |a, b| self.field.sub(a, b), |b| self.field.neg(b))
    }

    pub fn neg(&self, f: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        f.map_coeffs(|c| self.field.neg(c))
    }

    /// `c * m * f`. Multiplication by a monomial preserves the term order.
    pub fn mul_term(&self, f: &Polynomial<F::Elem>, c: &F::Elem, m: &Monomial) -> Polynomial<F::Elem> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        let terms = f
            .terms
            .iter()
            .filter_map(|t| {
                let coeff = self.field.mul(&t.coeff, c);
                // A zero product is only possible in fields with zero divisors
                // in their non-exact part; keep the canonical form regardless.
                (!self.field.is_zero(&coeff)).then(|| Term {
                    coeff,
                    mono: t.mono.mul(m),
                })
            })
            .collect();
        Polynomial { terms }
    }

    pub fn scale(&self, f: &Polynomial<F::Elem>, c: &F::Elem) -> Polynomial<F::Elem> {
        self.mul_term(f, c, &Monomial::ONE)
    }

    pub fn mul(&self, f: &Polynomial<F::Elem>, g: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        let mut acc: BTreeMap<u128, Term<F::Elem>> = BTreeMap::new();
        for a in &f.terms {
            for b in &g.terms {
                let mono = a.mono.mul(&b.mono);
                let prod = self.field.mul(&a.coeff, &b.coeff);
                let key = self.order.key(&mono);
                match acc.get_mut(&key) {
                    Some(t) => t.coeff = self.field.add(&t.coeff, &prod),
                    None => {
                        acc.insert(key, Term { coeff: prod, mono });
                    }
                }
            }
        }
        let field = &self.field;
        Polynomial {
            terms: acc
                .into_values()
                .rev()
                .filter(|t| !field.is_zero(&t.coeff))
                .collect(),
        }
    }

    pub fn square(&self, f: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        self.mul(f, f)
    }

    /// Divides through by the leading coefficient.
    pub fn monic(&self, f: &Polynomial<F::Elem>) -> Result<Polynomial<F::Elem>, AlgebraError> {
        match f.lead() {
            None => Ok(Polynomial::zero()),
            Some(t) => {
                let inv = self.field.inv(&t.coeff)?;
                Ok(self.scale(f, &inv))
            }
        }
    }

    pub fn evaluate(&self, f: &Polynomial<F::Elem>, point: &[F::Elem; NVARS]) -> F::Elem {
        let mut acc = self.field.zero();
        for t in &f.terms {
            let mut v = t.coeff.clone();
            for (var, &e) in t.mono.exponents().iter().enumerate() {
                for _ in 0..e {
                    v = self.field.mul(&v, &point[var]);
                }
            }
            acc = self.field.add(&acc, &v);
        }
        acc
    }

    pub fn equal(&self, f: &Polynomial<F::Elem>, g: &Polynomial<F::Elem>) -> bool {
        f.len() == g.len()
            && f.terms
                .iter()
                .zip(&g.terms)
                .all(|(a, b)| a.mono == b.mono && self.field.equal(&a.coeff, &b.coeff))
    }
}
