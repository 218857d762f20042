//! Synthetic instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::influence::influence_of_indices;
use crate::ingest::{assign_costs, check_delta_range, default_cost_delta_range};
use crate::model::{BBox, Demand, InfluenceMatrix, Instance, Slot, UserId, Zone};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub n_slots: usize,
    pub n_users: usize,
    pub n_zones: usize,
    /// Expected number of users reached by one slot.
    pub coverage_density: f64,
    pub prob_range: (f64, f64),
    pub cost_delta_range: (f64, f64),
    /// Each zone's demand as a fraction of what all its slots reach together.
    pub demand_fraction: f64,
    /// Budget as a fraction of the total slot cost.
    pub budget_fraction: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_slots: 100,
            n_users: 1000,
            n_zones: 3,
            coverage_density: 60.0,
            prob_range: (0.1, 1.0),
            cost_delta_range: default_cost_delta_range(),
            demand_fraction: 0.2,
            budget_fraction: 0.2,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.n_slots == 0 || self.n_users == 0 || self.n_zones == 0 {
            return bad("slot, user and zone counts must be positive");
        }
        if self.n_users > UserId::MAX as usize || self.n_slots > u32::MAX as usize {
            return bad("slot or user count exceeds the id range");
        }
        if !(self.coverage_density >= 0.0 && self.coverage_density.is_finite()) {
            return bad("coverage_density must be a nonnegative number");
        }
        let (lo, hi) = self.prob_range;
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return bad("prob_range must be an interval inside (0, 1]");
        }
        for f in [self.demand_fraction, self.budget_fraction] {
            if !(0.0..=1.0).contains(&f) {
                return bad("demand_fraction and budget_fraction must lie in [0, 1]");
            }
        }
        check_delta_range(self.cost_delta_range)
    }
}

pub fn generate(params: &GenParams) -> Result<(Instance, Demand)> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let poisson = (params.coverage_density > 0.0).then(|| Poisson::new(params.coverage_density).expect("positive rate"));
    let (lo, hi) = params.prob_range;

    let mut slots = Vec::with_capacity(params.n_slots);
    let mut rows = Vec::with_capacity(params.n_slots);
    for id in 0..params.n_slots as u32 {
        slots.push(Slot {
            slot_id: id,
            billboard_id: id,
            time_index: 0,
            cost: 0,
            zone_id: rng.random_range(0..params.n_zones),
        });
        let reach = poisson.map_or(0, |d| (d.sample(&mut rng) as usize).min(params.n_users));
        let mut users = sample(&mut rng, params.n_users, reach).into_vec();
        users.sort_unstable();
        rows.push(
            users
                .into_iter()
                .map(|u| (u as UserId, rng.random_range(lo..=hi)))
                .collect::<Vec<_>>(),
        );
    }
    let matrix = InfluenceMatrix::new(params.n_users, rows);
    let slots = assign_costs(&slots, &matrix, params.cost_delta_range, rng.random());
    let zones = strip_zones(params.n_zones);
    let instance = Instance::new(slots, zones, matrix)?;

    let demand = scaled_demand(&instance, params.demand_fraction, params.budget_fraction);
    Ok((instance, demand))
}

/// Demand set to `demand_fraction` of each zone's total reach and a budget of
/// `budget_fraction` of the total slot cost.
pub fn scaled_demand(instance: &Instance, demand_fraction: f64, budget_fraction: f64) -> Demand {
    let sigma = instance
        .zone_members()
        .iter()
        .map(|members| demand_fraction * influence_of_indices(instance, members.iter().copied()))
        .collect();
    let total: u64 = instance.slots().iter().map(|s| s.cost).sum();
    let budget = (budget_fraction * total as f64).floor() as u64;
    Demand::new(sigma, budget)
}

/// Side-by-side unit cells along longitude; synthetic zones carry no geometry.
fn strip_zones(n: usize) -> Vec<Zone> {
    (0..n)
        .map(|z| Zone {
            zone_id: z,
            bbox: BBox::new(0.0, 1.0, z as f64, z as f64 + 1.0),
        })
        .collect()
}

/// The four-slot running example: singleton influences (2, 3, 7, 5), costs
/// (100, 200, 400, 300), zones (0, 0, 1, 2), demand (5, 7, 0), budget 1000.
/// Its optimum takes every slot for influence 17.
pub fn toy_instance() -> (Instance, Demand) {
    let spec: [(u32, u64, usize, std::ops::Range<u32>); 4] =
        [(1, 100, 0, 0..2), (2, 200, 0, 2..5), (3, 400, 1, 5..12), (4, 300, 2, 12..17)];
    let slots = spec
        .iter()
        .map(|(id, cost, zone, _)| Slot {
            slot_id: *id,
            billboard_id: *id,
            time_index: 0,
            cost: *cost,
            zone_id: *zone,
        })
        .collect();
    let triples = spec
        .iter()
        .flat_map(|(id, _, _, users)| users.clone().map(move |u| (*id, u, 1.0)));
    let instance = Instance::from_triples(slots, strip_zones(3), 17, triples).expect("toy instance is well formed");
    (instance, Demand::new(vec![5.0, 7.0, 0.0], 1000))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate, validate_instance};

    #[test]
    fn toy_table() {
        let (inst, demand) = toy_instance();
        let infl: Vec<f64> = (0..4).map(|i| inst.singleton_influence(i)).collect();
        assert_eq!(infl, vec![2.0, 3.0, 7.0, 5.0]);
        let costs: Vec<u64> = inst.slots().iter().map(|s| s.cost).collect();
        assert_eq!(costs, vec![100, 200, 400, 300]);
        let zones: Vec<usize> = inst.slots().iter().map(|s| s.zone_id).collect();
        assert_eq!(zones, vec![0, 0, 1, 2]);
        assert!(validate_instance(&inst).is_empty());
        assert_eq!(demand.budget, 1000);
    }

    #[test]
    fn generated_instances_validate() {
        for seed in 0..20 {
            let params = GenParams {
                n_slots: 30,
                n_users: 200,
                n_zones: 4,
                coverage_density: 20.0,
                seed,
                ..GenParams::default()
            };
            let (inst, demand) = generate(&params).unwrap();
            assert!(validate_instance(&inst).is_empty());
            assert_eq!(inst.n_slots(), 30);
            assert!(demand.check(&inst).is_ok());
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let params = GenParams {
            seed: 42,
            ..GenParams::default()
        };
        let a = generate(&params).unwrap();
        let b = generate(&params).unwrap();
        assert_eq!(a.0.to_json().unwrap(), b.0.to_json().unwrap());
        assert_eq!(a.1, b.1);
        let c = generate(&GenParams { seed: 43, ..params }).unwrap();
        assert_ne!(a.0.to_json().unwrap(), c.0.to_json().unwrap());
    }

    #[test]
    fn demand_fraction_extremes() {
        let params = GenParams {
            n_slots: 20,
            n_users: 100,
            demand_fraction: 0.0,
            ..GenParams::default()
        };
        let (_, demand) = generate(&params).unwrap();
        assert!(demand.sigma.iter().all(|&s| s == 0.0));

        let params = GenParams {
            demand_fraction: 1.0,
            budget_fraction: 1.0,
            ..params
        };
        let (inst, demand) = generate(&params).unwrap();
        let all: Vec<u32> = inst.slots().iter().map(|s| s.slot_id).collect();
        assert!(evaluate(&inst, &demand, &all).unwrap().feasible);
    }

    #[test]
    fn rejects_bad_params() {
        for p in [
            GenParams {
                n_slots: 0,
                ..GenParams::default()
            },
            GenParams {
                prob_range: (0.0, 0.5),
                ..GenParams::default()
            },
            GenParams {
                budget_fraction: 1.5,
                ..GenParams::default()
            },
        ] {
            assert!(generate(&p).is_err());
        }
    }
}
