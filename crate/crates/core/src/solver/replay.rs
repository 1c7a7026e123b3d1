use super::lockstep::{float_part, pair_polynomial, LockstepField, Paired};
use super::template::SolverTemplate;
use super::SolverError;
use crate::algebra::{BigFloat, FloatField, PolyRing, Polynomial};
use crate::groebner::{reduce_basis, replay_trace};

/// Below this the float side cannot hold even the input coefficients.
const MIN_PRECISION: u32 = 64;

/// Runs the template trace on the template system and `float_system`
/// together and returns the reduced basis with both halves.
pub fn replay_lockstep(
    template: &SolverTemplate,
    float_system: &[Polynomial<BigFloat>],
    precision_bits: u32,
) -> Result<Vec<Polynomial<Paired>>, SolverError> {
    if precision_bits < MIN_PRECISION {
        return Err(SolverError::Usage(format!("precision must be at least {MIN_PRECISION} bits")));
    }
    if float_system.len() != template.system.len() {
        return Err(SolverError::Usage(format!(
            "{} float polynomials for a template of {}",
            float_system.len(),
            template.system.len()
        )));
    }
    let paired = template
        .system
        .iter()
        .zip(float_system)
        .enumerate()
        .map(|(k, (t, f))| {
            pair_polynomial(t, f).ok_or_else(|| SolverError::SupportMismatch(format!("input polynomial {k}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ring = PolyRing::new(LockstepField::new(precision_bits), template.order);
    let state = replay_trace(&ring, paired, &template.trace)?;
    let basis: Vec<Polynomial<Paired>> = state.polynomials().cloned().collect();
    Ok(reduce_basis(&ring, &basis)?)
}

/// The reduced float basis obtained by replaying `template` on
/// `float_system`. Every cancellation in the template forces the matching
/// float coefficient to zero; nothing is ever zeroed by magnitude.
pub fn replay(
    template: &SolverTemplate,
    float_system: &[Polynomial<BigFloat>],
    precision_bits: u32,
) -> Result<Vec<Polynomial<BigFloat>>, SolverError> {
    let reduced = replay_lockstep(template, float_system, precision_bits)?;
    let ring = PolyRing::new(FloatField::new(precision_bits), template.order);
    Ok(reduced.iter().map(|p| float_part(&ring, p)).collect())
}
