//! Exact evaluation of the expected-influence function
//!
//! ```text
//! I(S) = Σ_u [1 − Π_{s∈S} (1 − Pr(s, u))]
//! ```
//!
//! plus [`CoverageState`], which caches the per-user product so a marginal
//! gain only touches the users in one slot's row.

use crate::error::{Error, Result};
use crate::model::{Instance, SlotId, ZoneId};

/// Batch evaluation over slot indices. Repeated indices are applied once.
pub(crate) fn influence_of_indices(instance: &Instance, indices: impl Iterator<Item = usize>) -> f64 {
    let mut residual = vec![1.0f64; instance.n_users()];
    let mut applied = vec![false; instance.n_slots()];
    let mut touched = Vec::new();
    for i in indices {
        if std::mem::replace(&mut applied[i], true) {
            continue;
        }
        for &(u, p) in instance.row(i) {
            let r = &mut residual[u as usize];
            if *r == 1.0 {
                touched.push(u);
            }
            *r *= 1.0 - p;
        }
    }
    // Both paths sum in user order (untouched users add exactly 0.0), so the
    // result does not depend on which one runs.
    if touched.len() * 16 > residual.len() {
        return residual.iter().map(|r| 1.0 - r).sum();
    }
    touched.sort_unstable();
    touched.dedup();
    touched.iter().map(|&u| 1.0 - residual[u as usize]).sum()
}

pub fn influence_of(instance: &Instance, selected: &[SlotId]) -> Result<f64> {
    let idx = instance.indices_of(selected)?;
    Ok(influence_of_indices(instance, idx.into_iter()))
}

/// Influence of the members of `selected` that lie in `zone`.
pub fn zonal_influence_of(instance: &Instance, selected: &[SlotId], zone: ZoneId) -> Result<f64> {
    if zone >= instance.n_zones() {
        return Err(Error::UnknownZone(zone));
    }
    let idx = instance.indices_of(selected)?;
    Ok(influence_of_indices(
        instance,
        idx.into_iter().filter(|&i| instance.slot(i).zone_id == zone),
    ))
}

/// Running selection with per-user residual non-influence `r_u = Π (1 − p)`.
///
/// Cloning is `O(n_users + n_slots)`; there is no undo.
#[derive(Debug, Clone)]
pub struct CoverageState<'a> {
    instance: &'a Instance,
    residual: Vec<f64>,
    influence: f64,
    member: Vec<bool>,
    order: Vec<usize>,
    cost: u64,
    version: u64,
}

impl<'a> CoverageState<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        CoverageState {
            instance,
            residual: vec![1.0; instance.n_users()],
            influence: 0.0,
            member: vec![false; instance.n_slots()],
            order: Vec::new(),
            cost: 0,
            version: 0,
        }
    }

    pub fn with_slots(instance: &'a Instance, selected: &[SlotId]) -> Result<Self> {
        let mut st = CoverageState::new(instance);
        for &id in selected {
            st.commit(id)?;
        }
        Ok(st)
    }

    pub(crate) fn with_indices(instance: &'a Instance, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut st = CoverageState::new(instance);
        for i in indices {
            if !st.member[i] {
                st.commit_index(i);
            }
        }
        st
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn influence(&self) -> f64 {
        self.influence
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn residual(&self, user: usize) -> f64 {
        self.residual[user]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Member slot ids in commit order.
    pub fn members(&self) -> Vec<SlotId> {
        self.order.iter().map(|&i| self.instance.slot(i).slot_id).collect()
    }

    pub(crate) fn member_indices(&self) -> &[usize] {
        &self.order
    }

    pub(crate) fn contains_index(&self, index: usize) -> bool {
        self.member[index]
    }

    /// Bumped on every commit; lets lazy pickers tell stale scores apart.
    pub(crate) fn version(&self) -> u64 {
        self.version
    }

    /// `I(S ∪ {s}) − I(S)`.
    pub fn marginal_gain(&self, slot: SlotId) -> Result<f64> {
        let i = self.instance.index_of(slot).ok_or(Error::UnknownSlotId(slot))?;
        if self.member[i] {
            return Err(Error::AlreadySelected(slot));
        }
        Ok(self.gain_index(i))
    }

    /// Adds `slot` and returns the gain it contributed.
    pub fn commit(&mut self, slot: SlotId) -> Result<f64> {
        let i = self.instance.index_of(slot).ok_or(Error::UnknownSlotId(slot))?;
        if self.member[i] {
            return Err(Error::AlreadySelected(slot));
        }
        Ok(self.commit_index(i))
    }

    pub(crate) fn gain_index(&self, index: usize) -> f64 {
        self.instance
            .row(index)
            .iter()
            .map(|&(u, p)| self.residual[u as usize] * p)
            .sum()
    }

    pub(crate) fn commit_index(&mut self, index: usize) -> f64 {
        debug_assert!(!self.member[index]);
        let gain = self.gain_index(index);
        for &(u, p) in self.instance.row(index) {
            self.residual[u as usize] *= 1.0 - p;
        }
        self.influence += gain;
        self.member[index] = true;
        self.order.push(index);
        self.cost += self.instance.cost(index);
        self.version += 1;
        gain
    }
}
