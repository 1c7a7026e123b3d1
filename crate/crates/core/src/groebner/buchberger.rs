use std::time::{Duration, Instant};

use super::pairs::{CriticalPair, PairQueue};
use super::reduce::{rank_candidates, reduce_terms, s_poly_elems, BasisElem, Reductors};
use super::autoreduce::{autoreduce, replay_autoreduce};
use super::trace::{fingerprint, Trace, TracePair, TraceStep};
use super::GroebnerError;
use crate::algebra::{Field, PolyRing, Polynomial};

/// How pending pairs are prioritized. Each multi-reduction takes every
/// pair of the smallest priority.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Selection {
    /// Degree of the lcm of the leading monomials.
    #[default]
    Normal,
    /// Sugar degree: the degree the pair would have if the input were
    /// homogenized.
    Sugar,
}

#[derive(Clone, Debug)]
pub struct BuchbergerConfig {
    pub selection: Selection,
    /// Interreduce the input before forming pairs.
    pub autoreduce: bool,
    pub max_basis_len: usize,
    pub max_steps: usize,
}

impl Default for BuchbergerConfig {
    fn default() -> Self {
        BuchbergerConfig {
            selection: Selection::default(),
            autoreduce: true,
            max_basis_len: 50_000,
            max_steps: 100_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasisStats {
    pub multi_reductions: usize,
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    /// Polynomials ever added, redundant ones included.
    pub basis_len: usize,
    pub elapsed: Duration,
}

/// A basis under construction. Elements are never removed; the ones made
/// redundant by a later leading monomial are only marked inactive.
#[derive(Clone, Debug)]
pub struct BasisState<E> {
    pub(crate) elems: Vec<BasisElem<E>>,
    sugar: Vec<u16>,
    active: Vec<bool>,
    selection: Selection,
    queue: PairQueue,
    pub stats: BasisStats,
}

impl<E: Clone> BasisState<E> {
    /// Starts from `system`, skipping zero polynomials, with all initial
    /// pairs queued.
    pub fn new<F: Field<Elem = E>>(
        ring: &PolyRing<F>,
        system: Vec<Polynomial<E>>,
        selection: Selection,
    ) -> Result<BasisState<E>, GroebnerError> {
        let mut state = BasisState::empty(selection);
        for f in system.into_iter().filter(|f| !f.is_zero()) {
            let sugar = f.total_degree().unwrap_or(0);
            state.insert(ring, f, sugar, true)?;
        }
        Ok(state)
    }

    fn empty(selection: Selection) -> BasisState<E> {
        BasisState {
            elems: Vec::new(),
            sugar: Vec::new(),
            active: Vec::new(),
            selection,
            queue: PairQueue::new(),
            stats: BasisStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn polynomials(&self) -> impl Iterator<Item = &Polynomial<E>> {
        self.elems.iter().map(|e| &e.poly)
    }

    pub fn into_polynomials(self) -> Vec<Polynomial<E>> {
        self.elems.into_iter().map(|e| e.poly).collect()
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    pub fn pending(&self) -> &PairQueue {
        &self.queue
    }

    /// Removes the next batch of pairs: all pending pairs of minimal lcm
    /// degree.
    pub fn next_batch(&mut self) -> Vec<CriticalPair> {
        self.queue.pop_batch()
    }

    /// Scales `f` as the field prescribes, appends it and, if `with_pairs`,
    /// updates the pair queue and the active set.
    fn insert<F: Field<Elem = E>>(
        &mut self,
        ring: &PolyRing<F>,
        f: Polynomial<E>,
        sugar: u16,
        with_pairs: bool,
    ) -> Result<usize, GroebnerError> {
        let lc = f.lead().ok_or(GroebnerError::ZeroPolynomial)?;
        let scale = ring.field.insertion_scale(&lc.coeff)?;
        let sugar = sugar.max(f.total_degree().unwrap_or(0));
        let elem = BasisElem::new(ring, ring.scale(&f, &scale))?;
        let k = self.elems.len();
        self.elems.push(elem);
        self.sugar.push(sugar);
        self.active.push(true);
        self.stats.basis_len = self.elems.len();
        if with_pairs {
            self.update(k);
        }
        Ok(k)
    }

    /// Gebauer–Möller update for the new element `k`.
    fn update(&mut self, k: usize) {
        let h = *self.elems[k].lead_mono();
        let candidates: Vec<(usize, _)> = (0..k)
            .filter(|&g| self.active[g])
            .map(|g| (g, h.lcm(self.elems[g].lead_mono())))
            .collect();

        // Among new pairs, keep one per minimal lcm; coprime ones are kept
        // here only to shadow others and then dropped.
        let mut kept: Vec<(usize, crate::algebra::Monomial)> = Vec::new();
        for (idx, &(g, l)) in candidates.iter().enumerate() {
            let coprime = h.is_coprime(self.elems[g].lead_mono());
            let shadowed = candidates[idx + 1..].iter().any(|(_, l2)| l2.divides(&l))
                || kept.iter().any(|(_, l2)| l2.divides(&l));
            if coprime || !shadowed {
                kept.push((g, l));
            }
        }
        kept.retain(|&(g, _)| !h.is_coprime(self.elems[g].lead_mono()));

        let elems = &self.elems;
        self.queue.retain(|p| {
            !(h.divides(&p.lcm)
                && h.lcm(elems[p.i].lead_mono()) != p.lcm
                && h.lcm(elems[p.j].lead_mono()) != p.lcm)
        });
        for (g, lcm) in kept {
            let priority = self.priority(g, k, &lcm);
            self.queue.insert(CriticalPair { i: g, j: k, lcm, priority });
        }
        for g in 0..k {
            if self.active[g] && h.divides(self.elems[g].lead_mono()) {
                self.active[g] = false;
            }
        }
    }

    fn priority(&self, i: usize, j: usize, lcm: &crate::algebra::Monomial) -> u16 {
        match self.selection {
            Selection::Normal => lcm.degree(),
            Selection::Sugar => {
                let side = |k: usize| self.sugar[k] + lcm.degree() - self.elems[k].lead_mono().degree();
                side(i).max(side(j))
            }
        }
    }

    fn candidates(&self) -> Vec<usize> {
        rank_candidates((0..self.elems.len()).filter(|&i| self.active[i]))
    }

    fn fingerprint<F: Field<Elem = E>>(&self, field: &F, from: usize) -> Option<u64> {
        fingerprint(field, self.elems.iter().enumerate().skip(from).map(|(i, e)| (i, &e.poly)))
    }
}

/// Reduces the S-polynomials of `pairs` in order. Each non-zero remainder
/// joins the basis immediately, so later pairs of the batch reduce against
/// it. An empty batch leaves the state untouched.
pub fn multi_reduce<F: Field>(
    ring: &PolyRing<F>,
    state: &mut BasisState<F::Elem>,
    pairs: &[CriticalPair],
    mut trace: Option<&mut TraceStep>,
) -> Result<(), GroebnerError> {
    if pairs.is_empty() {
        return Ok(());
    }
    let first_new = state.len();
    let mut candidates = state.candidates();
    for p in pairs {
        let s = s_poly_elems(ring, &state.elems[p.i], &state.elems[p.j]);
        let mut used = Vec::new();
        let r = reduce_terms(
            ring,
            s,
            &state.elems,
            Reductors::Search {
                candidates: &candidates,
                record: Some(&mut used),
            },
        )?;
        state.stats.pairs_reduced += 1;
        if r.is_zero() {
            state.stats.zero_reductions += 1;
            continue;
        }
        state.insert(ring, r, p.priority, true)?;
        candidates = state.candidates();
        if let Some(step) = trace.as_deref_mut() {
            step.pairs.push(TracePair {
                i: p.i as u32,
                j: p.j as u32,
                reductors: used,
            });
        }
    }
    if let Some(step) = trace {
        step.fingerprint = state.fingerprint(&ring.field, first_new);
    }
    state.stats.multi_reductions += 1;
    Ok(())
}

/// Runs Buchberger's algorithm on `system`, returning every polynomial
/// produced (a Groebner basis, not yet reduced). If `trace` is given it
/// receives one step per multi-reduction.
pub fn buchberger<F: Field>(
    ring: &PolyRing<F>,
    system: Vec<Polynomial<F::Elem>>,
    config: &BuchbergerConfig,
    mut trace: Option<&mut Trace>,
) -> Result<BasisState<F::Elem>, GroebnerError> {
    let start = Instant::now();
    let system = if config.autoreduce {
        let mut input = Vec::new();
        let system = autoreduce(ring, system, Some(&mut input))?;
        if let Some(t) = trace.as_deref_mut() {
            t.input = input;
            t.input_fingerprint = fingerprint(&ring.field, system.iter().enumerate());
        }
        system
    } else {
        system
    };
    let mut state = BasisState::new(ring, system, config.selection)?;
    loop {
        let batch = state.next_batch();
        if batch.is_empty() {
            break;
        }
        if state.stats.multi_reductions >= config.max_steps {
            return Err(GroebnerError::ResourceLimit(format!(
                "more than {} multi-reductions",
                config.max_steps
            )));
        }
        let mut step = TraceStep::default();
        multi_reduce(ring, &mut state, &batch, Some(&mut step))?;
        if let Some(t) = trace.as_deref_mut() {
            t.steps.push(step);
        }
        if state.len() > config.max_basis_len {
            return Err(GroebnerError::ResourceLimit(format!(
                "basis grew past {} polynomials",
                config.max_basis_len
            )));
        }
    }
    state.stats.elapsed = start.elapsed();
    Ok(state)
}

/// Repeats a recorded computation on `system` without making any choices:
/// the same pairs, the same reductors, in the same order. The system must
/// have the support pattern of the one the trace was recorded on.
pub fn replay_trace<F: Field>(
    ring: &PolyRing<F>,
    system: Vec<Polynomial<F::Elem>>,
    trace: &Trace,
) -> Result<BasisState<F::Elem>, GroebnerError> {
    let start = Instant::now();
    let system = replay_autoreduce(ring, system, &trace.input)?;
    if let (Some(want), Some(got)) = (trace.input_fingerprint, fingerprint(&ring.field, system.iter().enumerate())) {
        if want != got {
            return Err(GroebnerError::TraceMismatch("interreduced input diverged".into()));
        }
    }
    let mut state = BasisState::empty(Selection::default());
    for f in system.into_iter().filter(|f| !f.is_zero()) {
        state.insert(ring, f, 0, false)?;
    }
    for (n, step) in trace.steps.iter().enumerate() {
        let first_new = state.len();
        for p in &step.pairs {
            let (i, j) = (p.i as usize, p.j as usize);
            if i >= state.len() || j >= state.len() {
                return Err(GroebnerError::TraceMismatch(format!(
                    "step {n}: pair ({i}, {j}) refers to a future polynomial"
                )));
            }
            let s = s_poly_elems(ring, &state.elems[i], &state.elems[j]);
            let r = reduce_terms(ring, s, &state.elems, Reductors::Replay { sequence: &p.reductors })?;
            state.stats.pairs_reduced += 1;
            if r.is_zero() {
                return Err(GroebnerError::TraceMismatch(format!(
                    "step {n}: pair ({i}, {j}) reduced to zero"
                )));
            }
            state.insert(ring, r, 0, false)?;
        }
        if let (Some(want), Some(got)) = (step.fingerprint, state.fingerprint(&ring.field, first_new)) {
            if want != got {
                return Err(GroebnerError::TraceMismatch(format!(
                    "step {n}: exact coefficients diverged"
                )));
            }
        }
        state.stats.multi_reductions += 1;
    }
    state.stats.elapsed = start.elapsed();
    Ok(state)
}
