use crate::algebra::{Field, Polynomial};

/// One S-polynomial that survived reduction: the pair it came from and the
/// basis indices used, in order, to reduce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePair {
    pub i: u32,
    pub j: u32,
    pub reductors: Vec<u32>,
}

/// One multi-reduction step. Pairs whose S-polynomial reduced to zero are
/// not recorded.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TraceStep {
    pub pairs: Vec<TracePair>,
    /// Hash of the exact coefficients of the polynomials this step appended.
    pub fingerprint: Option<u64>,
}

/// In-place reduction of input polynomial `target` by the other inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReduction {
    pub target: u32,
    pub reductors: Vec<u32>,
}

/// Everything needed to redo a Groebner basis computation without making
/// a single choice.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Trace {
    /// Interreduction of the input system, applied before any pair.
    pub input: Vec<TraceReduction>,
    /// Hash of the interreduced input.
    pub input_fingerprint: Option<u64>,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn pair_count(&self) -> usize {
        self.steps.iter().map(|s| s.pairs.len()).sum()
    }

    pub fn reduction_count(&self) -> usize {
        let input: usize = self.input.iter().map(|r| r.reductors.len()).sum();
        let pairs: usize = self.steps.iter().flat_map(|s| &s.pairs).map(|p| p.reductors.len()).sum();
        input + pairs
    }
}

/// Hash of indexed polynomials over their exact coefficients; `None` if the
/// field has no exact part.
pub(crate) fn fingerprint<'a, F: Field>(
    field: &F,
    polys: impl IntoIterator<Item = (usize, &'a Polynomial<F::Elem>)>,
) -> Option<u64>
where
    F::Elem: 'a,
{
    let mut h = Fnv::new();
    for (i, p) in polys {
        h.write_u64(i as u64);
        h.write_u64(p.len() as u64);
        for t in p.terms() {
            let ex = t.mono.exponents();
            h.write_u64(u64::from_le_bytes(ex[..8].try_into().unwrap()));
            h.write_u64(ex[8] as u64 | (ex[9] as u64) << 8);
            h.write_u64(field.fingerprint(&t.coeff)?);
        }
    }
    Some(h.finish())
}

/// FNV-1a, stable across platforms and toolchains.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Fnv(u64);

impl Fnv {
    pub(crate) fn new() -> Fnv {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn write_u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub(crate) fn finish(self) -> u64 {
        self.0
    }
}
