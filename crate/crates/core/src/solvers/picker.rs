use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::influence::CoverageState;

/// What a greedy step maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Score {
    /// `I(S ∪ {s}) − I(S)`, equivalently `I(S ∪ {s})`.
    Gain,
    /// Gain divided by the slot cost.
    Ratio,
}

impl Score {
    pub(crate) fn eval(self, state: &CoverageState<'_>, index: usize) -> f64 {
        let gain = state.gain_index(index);
        match self {
            Score::Gain => gain,
            Score::Ratio => gain / state.instance().cost(index) as f64,
        }
    }
}

#[derive(Debug)]
struct Entry {
    score: f64,
    index: usize,
    stamp: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // higher score first, then lower index
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Lazy (CELF-style) argmax over a candidate pool.
///
/// Scores only shrink as the state grows, so a stale heap entry is an upper
/// bound on its fresh score. The first fresh entry on top is the exact argmax,
/// ties going to the lowest index.
pub(crate) struct LazyPicker {
    heap: BinaryHeap<Entry>,
    score: Score,
}

impl LazyPicker {
    pub(crate) fn new(score: Score, state: &CoverageState<'_>, candidates: impl IntoIterator<Item = usize>) -> Self {
        let stamp = state.version();
        let heap = candidates
            .into_iter()
            .map(|index| Entry {
                score: score.eval(state, index),
                index,
                stamp,
            })
            .collect();
        LazyPicker { heap, score }
    }

    /// Removes and returns the best candidate under `state`.
    pub(crate) fn pop(&mut self, state: &CoverageState<'_>) -> Option<usize> {
        let now = state.version();
        while let Some(top) = self.heap.pop() {
            if top.stamp == now {
                return Some(top.index);
            }
            self.heap.push(Entry {
                score: self.score.eval(state, top.index),
                index: top.index,
                stamp: now,
            });
        }
        None
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate, GenParams};

    fn plain_argmax(score: Score, state: &CoverageState<'_>, pool: &[usize]) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for &i in pool {
            let s = score.eval(state, i);
            match best {
                Some((b, _)) if s <= b => {}
                _ => best = Some((s, i)),
            }
        }
        best.map(|(_, i)| i)
    }

    #[test]
    fn lazy_order_matches_full_rescan() {
        for seed in 0..20 {
            let params = GenParams {
                n_slots: 40,
                n_users: 60,
                n_zones: 2,
                coverage_density: 12.0,
                seed,
                ..GenParams::default()
            };
            let (inst, _) = generate(&params).unwrap();
            for score in [Score::Gain, Score::Ratio] {
                let mut state = CoverageState::new(&inst);
                let mut pool: Vec<usize> = (0..inst.n_slots()).collect();
                let mut picker = LazyPicker::new(score, &state, pool.clone());
                for _ in 0..15 {
                    let expect = plain_argmax(score, &state, &pool).unwrap();
                    let got = picker.pop(&state).unwrap();
                    assert_eq!(got, expect, "seed {seed} {score:?}");
                    pool.retain(|&i| i != got);
                    state.commit_index(got);
                }
            }
        }
    }
}
