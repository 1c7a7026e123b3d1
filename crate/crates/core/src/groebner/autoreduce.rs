use super::reduce::{reduce_terms, BasisElem, Reductors};
use super::trace::TraceReduction;
use super::GroebnerError;
use crate::algebra::{Field, PolyRing, Polynomial};

/// Zero polynomials keep their slot so indices stay stable; they are never
/// offered as reductors.
fn slot<F: Field>(ring: &PolyRing<F>, p: Polynomial<F::Elem>) -> Result<BasisElem<F::Elem>, GroebnerError> {
    if p.is_zero() {
        Ok(BasisElem {
            poly: p,
            lead_inv: ring.field.zero(),
        })
    } else {
        BasisElem::new(ring, p)
    }
}

fn into_polys<E>(elems: Vec<BasisElem<E>>) -> Vec<Polynomial<E>> {
    elems.into_iter().map(|e| e.poly).collect()
}

/// Interreduces the input: each polynomial in turn is fully reduced by the
/// others, in passes, until no term of any of them is reducible. Positions
/// are kept (a polynomial that vanishes stays as zero). Every reduction that
/// changed something is appended to `record`.
pub fn autoreduce<F: Field>(
    ring: &PolyRing<F>,
    system: Vec<Polynomial<F::Elem>>,
    mut record: Option<&mut Vec<TraceReduction>>,
) -> Result<Vec<Polynomial<F::Elem>>, GroebnerError> {
    let mut elems = system
        .into_iter()
        .map(|p| slot(ring, p))
        .collect::<Result<Vec<_>, _>>()?;
    loop {
        let mut changed = false;
        for i in 0..elems.len() {
            if elems[i].poly.is_zero() {
                continue;
            }
            let candidates: Vec<usize> = (0..elems.len())
                .filter(|&j| j != i && !elems[j].poly.is_zero())
                .collect();
            let mut used = Vec::new();
            let r = reduce_terms(
                ring,
                elems[i].poly.clone(),
                &elems,
                Reductors::Search {
                    candidates: &candidates,
                    record: Some(&mut used),
                },
            )?;
            if used.is_empty() {
                continue;
            }
            changed = true;
            elems[i] = slot(ring, r)?;
            if let Some(rec) = record.as_deref_mut() {
                rec.push(TraceReduction {
                    target: i as u32,
                    reductors: used,
                });
            }
        }
        if !changed {
            return Ok(into_polys(elems));
        }
    }
}

/// Applies recorded input reductions verbatim.
pub(crate) fn replay_autoreduce<F: Field>(
    ring: &PolyRing<F>,
    system: Vec<Polynomial<F::Elem>>,
    reductions: &[TraceReduction],
) -> Result<Vec<Polynomial<F::Elem>>, GroebnerError> {
    let mut elems = system
        .into_iter()
        .map(|p| slot(ring, p))
        .collect::<Result<Vec<_>, _>>()?;
    let live = |elems: &[BasisElem<F::Elem>], k: u32| elems.get(k as usize).is_some_and(|e| !e.poly.is_zero());
    for (n, red) in reductions.iter().enumerate() {
        let t = red.target;
        if !live(&elems, t) || red.reductors.iter().any(|&k| k == t || !live(&elems, k)) {
            return Err(GroebnerError::TraceMismatch(format!(
                "input reduction {n} refers to a missing polynomial"
            )));
        }
        let r = reduce_terms(
            ring,
            elems[t as usize].poly.clone(),
            &elems,
            Reductors::Replay {
                sequence: &red.reductors,
            },
        )?;
        elems[t as usize] = slot(ring, r)?;
    }
    Ok(into_polys(elems))
}
