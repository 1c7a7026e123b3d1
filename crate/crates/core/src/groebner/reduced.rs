use super::reduce::{rank_candidates, reduce_terms, BasisElem, Reductors};
use super::GroebnerError;
use crate::algebra::{Field, PolyRing, Polynomial};

/// The reduced Groebner basis of the ideal spanned by the Groebner basis
/// `g`: minimal, tail-reduced and monic, sorted by decreasing leading
/// monomial. Zero polynomials are ignored.
pub fn reduce_basis<F: Field>(
    ring: &PolyRing<F>,
    g: &[Polynomial<F::Elem>],
) -> Result<Vec<Polynomial<F::Elem>>, GroebnerError> {
    let elems = g
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| BasisElem::new(ring, p.clone()))
        .collect::<Result<Vec<_>, _>>()?;

    // Keep an element unless another leading monomial divides its own; of
    // equal leading monomials the first survives.
    let minimal: Vec<usize> = (0..elems.len())
        .filter(|&i| {
            let lm = elems[i].lead_mono();
            !(0..elems.len()).any(|j| {
                j != i && {
                    let other = elems[j].lead_mono();
                    other.divides(lm) && (other != lm || j < i)
                }
            })
        })
        .collect();

    let mut out = Vec::with_capacity(minimal.len());
    for &i in &minimal {
        let others = rank_candidates(minimal.iter().copied().filter(|&j| j != i));
        let r = reduce_terms(
            ring,
            elems[i].poly.clone(),
            &elems,
            Reductors::Search {
                candidates: &others,
                record: None,
            },
        )?;
        out.push(ring.monic(&r)?);
    }
    out.sort_by(|a, b| {
        ring.order
            .compare(b.lead_mono().unwrap(), a.lead_mono().unwrap())
    });
    Ok(out)
}
