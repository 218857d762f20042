#![allow(dead_code)]

//! Test-side reference implementations, written against the raw matrix only.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zonesel::datagen::{generate, GenParams};
use zonesel::model::{Demand, Instance, SlotId};

pub const TOL: f64 = 1e-9;

/// Expected number of reached users, one product per user.
pub fn oracle_influence(inst: &Instance, picks: &[usize]) -> f64 {
    let mut miss: BTreeMap<u32, f64> = BTreeMap::new();
    for &i in picks {
        for &(u, p) in &inst.matrix().rows()[i] {
            *miss.entry(u).or_insert(1.0) *= 1.0 - p;
        }
    }
    miss.values().map(|m| 1.0 - m).sum()
}

pub fn oracle_zonal(inst: &Instance, picks: &[usize], zone: usize) -> f64 {
    let mine: Vec<usize> = picks.iter().copied().filter(|&i| inst.slots()[i].zone_id == zone).collect();
    oracle_influence(inst, &mine)
}

pub fn oracle_cost(inst: &Instance, picks: &[usize]) -> u64 {
    picks.iter().map(|&i| inst.slots()[i].cost).sum()
}

pub fn oracle_feasible(inst: &Instance, demand: &Demand, picks: &[usize]) -> bool {
    oracle_cost(inst, picks) <= demand.budget
        && demand
            .sigma
            .iter()
            .enumerate()
            .all(|(z, &s)| oracle_zonal(inst, picks, z) >= s - TOL)
}

/// Best feasible influence by plain bitmask enumeration; `None` if no subset
/// is feasible.
pub fn oracle_optimum(inst: &Instance, demand: &Demand) -> Option<f64> {
    let m = inst.slots().len();
    assert!(m <= 20, "enumeration oracle is for small instances");
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << m) {
        let picks: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if oracle_feasible(inst, demand, &picks) {
            let v = oracle_influence(inst, &picks);
            if best.is_none_or(|b| v > b) {
                best = Some(v);
            }
        }
    }
    best
}

pub fn positions(inst: &Instance, ids: &[SlotId]) -> Vec<usize> {
    ids.iter()
        .map(|id| inst.slots().iter().position(|s| s.slot_id == *id).expect("known slot id"))
        .collect()
}

/// Small random generator settings, varied per draw.
pub fn small_params(rng: &mut ChaCha8Rng, max_slots: usize, demand: bool) -> GenParams {
    GenParams {
        n_slots: rng.random_range(3..=max_slots),
        n_users: rng.random_range(20..=150),
        n_zones: rng.random_range(1..=3),
        coverage_density: rng.random_range(5.0..40.0),
        prob_range: (rng.random_range(0.05..0.5), 1.0),
        demand_fraction: if demand { rng.random_range(0.0..0.7) } else { 0.0 },
        budget_fraction: rng.random_range(0.15..0.8),
        seed: rng.random(),
        ..GenParams::default()
    }
}

pub fn small_instances(n: usize, max_slots: usize, demand: bool, seed: u64) -> Vec<(Instance, Demand)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| generate(&small_params(&mut rng, max_slots, demand)).expect("valid params"))
        .collect()
}
