use std::collections::BTreeMap;

use crate::algebra::Monomial;

/// A pending pair of basis indices with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub i: usize,
    pub j: usize,
    pub lcm: Monomial,
    /// Selection priority: the lcm degree or the sugar degree, depending on
    /// the strategy. Smaller is processed first.
    pub priority: u16,
}

/// Pending pairs keyed by (priority, i, j), which is also the processing
/// order.
#[derive(Clone, Debug, Default)]
pub struct PairQueue {
    pairs: BTreeMap<(u16, usize, usize), Monomial>,
}

impl PairQueue {
    pub fn new() -> PairQueue {
        PairQueue::default()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn insert(&mut self, p: CriticalPair) {
        debug_assert!(p.i < p.j);
        self.pairs.insert((p.priority, p.i, p.j), p.lcm);
    }

    pub fn iter(&self) -> impl Iterator<Item = CriticalPair> + '_ {
        self.pairs
            .iter()
            .map(|(&(priority, i, j), &lcm)| CriticalPair { i, j, lcm, priority })
    }

    pub(crate) fn retain(&mut self, mut keep: impl FnMut(&CriticalPair) -> bool) {
        self.pairs
            .retain(|&(priority, i, j), &mut lcm| keep(&CriticalPair { i, j, lcm, priority }));
    }

    /// Removes and returns every pair of minimal priority, sorted by (i, j).
    pub fn pop_batch(&mut self) -> Vec<CriticalPair> {
        let Some((&(deg, _, _), _)) = self.pairs.first_key_value() else {
            return Vec::new();
        };
        let rest = self.pairs.split_off(&(deg + 1, 0, 0));
        let batch = std::mem::replace(&mut self.pairs, rest);
        batch
            .into_iter()
            .map(|((priority, i, j), lcm)| CriticalPair { i, j, lcm, priority })
            .collect()
    }
}
