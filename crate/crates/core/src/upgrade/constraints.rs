use super::instance::{Anchor, Endpoint, Segment};
use super::UpgradeError;
use crate::algebra::{Field, Monomial, PolyRing, Polynomial, Term};

fn linear<F: Field>(ring: &PolyRing<F>, parts: Vec<(usize, F::Elem)>) -> Polynomial<F::Elem> {
    ring.from_terms(parts.into_iter().map(|(var, coeff)| Term {
        coeff,
        mono: Monomial::var(var),
    }))
}

/// The four rows of `H` applied to `p`, as linear forms in `h1..h9`.
pub fn row_forms<F: Field>(ring: &PolyRing<F>, p: &[F::Elem; 4]) -> [Polynomial<F::Elem>; 4] {
    let f = &ring.field;
    let [x1, x2, x3, x4] = p.clone();
    [
        linear(ring, vec![(0, x1.clone()), (1, x2.clone()), (2, x3.clone())]),
        linear(ring, vec![(3, x2.clone()), (4, x3.clone())]),
        linear(ring, vec![(5, x3.clone())]),
        linear(ring, vec![(0, x1.clone()), (6, x2), (7, x3), (8, f.sub(&x4, &x1))]),
    ]
}

/// `Σ_l (H_l X · H_4 Y − H_4 X · H_l Y)² − (H_4 X · H_4 Y)² d²`, which
/// vanishes when `H X` and `H Y` are a distance `d` apart.
pub fn segment_constraint<F: Field>(
    ring: &PolyRing<F>,
    x: &[F::Elem; 4],
    y: &[F::Elem; 4],
    d: &F::Elem,
) -> Polynomial<F::Elem> {
    let rx = row_forms(ring, x);
    let ry = row_forms(ring, y);
    let mut f = Polynomial::zero();
    for l in 0..3 {
        let a = ring.sub(&ring.mul(&rx[l], &ry[3]), &ring.mul(&rx[3], &ry[l]));
        f = ring.add(&f, &ring.square(&a));
    }
    let w = ring.mul(&rx[3], &ry[3]);
    let d2 = ring.field.mul(d, d);
    ring.sub(&f, &ring.scale(&ring.square(&w), &d2))
}

/// `1 − h1 h4 h6 h9 h10`.
pub fn det_constraint<F: Field>(ring: &PolyRing<F>) -> Polynomial<F::Elem> {
    let one = ring.field.one();
    ring.sub(
        &ring.constant(one.clone()),
        &ring.monomial(one, Monomial::product(&[0, 3, 5, 8, 9])),
    )
}

/// `1 − H_4 X`.
pub fn scale_constraint<F: Field>(ring: &PolyRing<F>, x: &[F::Elem; 4]) -> Polynomial<F::Elem> {
    let [_, _, _, row4] = row_forms(ring, x);
    ring.sub(&ring.constant(ring.field.one()), &row4)
}

/// Segment constraints in order, then the determinant constraint, then
/// the scale constraint at the anchor point.
pub fn build_system<F: Field>(
    ring: &PolyRing<F>,
    segments: &[Segment<F::Elem>],
    anchor: Anchor,
) -> Result<Vec<Polynomial<F::Elem>>, UpgradeError> {
    let a = segments.get(anchor.segment).ok_or_else(|| {
        UpgradeError::InvalidInstance(format!("anchor segment {} out of range", anchor.segment))
    })?;
    let anchor_point = match anchor.end {
        Endpoint::X => &a.x,
        Endpoint::Y => &a.y,
    };
    let mut system: Vec<_> = segments
        .iter()
        .map(|s| segment_constraint(ring, &s.x, &s.y, &s.d))
        .collect();
    system.push(det_constraint(ring));
    system.push(scale_constraint(ring, anchor_point));
    Ok(system)
}
