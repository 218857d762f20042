use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::influence::CoverageState;
use crate::model::{evaluate, unmet, Demand, Instance, Solution};

use super::{check_inputs, ids_of, singleton_order};

/// Picks slots by individual influence, highest first: first within each
/// demanded zone until its demand is met, then over everything left while
/// the budget allows. Slots that do not fit are skipped.
pub fn top_k_baseline(instance: &Instance, demand: &Demand) -> Result<Solution> {
    check_inputs(instance, demand)?;
    let order = singleton_order(instance, 0..instance.n_slots());
    let mut budget = demand.budget;
    let mut taken = vec![false; instance.n_slots()];
    let mut picks = Vec::new();

    for z in demand.demanded_zones() {
        let mut local = CoverageState::new(instance);
        for &s in order.iter().filter(|&&s| instance.slot(s).zone_id == z) {
            if !unmet(local.influence(), demand.sigma[z]) {
                break;
            }
            if instance.cost(s) <= budget {
                budget -= instance.cost(s);
                local.commit_index(s);
                taken[s] = true;
                picks.push(s);
            }
        }
    }
    for &s in &order {
        if !taken[s] && instance.cost(s) <= budget {
            budget -= instance.cost(s);
            taken[s] = true;
            picks.push(s);
        }
    }
    evaluate(instance, demand, &ids_of(instance, &picks))
}

/// Draws affordable slots uniformly without replacement: from each demanded
/// zone while its demand is unmet, then from all slots until nothing fits.
pub fn random_baseline(instance: &Instance, demand: &Demand, seed: u64) -> Result<Solution> {
    check_inputs(instance, demand)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut budget = demand.budget;
    let mut taken = vec![false; instance.n_slots()];
    let mut picks = Vec::new();

    let draw = |pool: &[usize], rng: &mut ChaCha8Rng| -> Option<usize> {
        (!pool.is_empty()).then(|| pool[rng.random_range(0..pool.len())])
    };

    for z in demand.demanded_zones() {
        let mut local = CoverageState::new(instance);
        while unmet(local.influence(), demand.sigma[z]) {
            let pool: Vec<usize> = (0..instance.n_slots())
                .filter(|&s| !taken[s] && instance.slot(s).zone_id == z && instance.cost(s) <= budget)
                .collect();
            let Some(s) = draw(&pool, &mut rng) else { break };
            budget -= instance.cost(s);
            local.commit_index(s);
            taken[s] = true;
            picks.push(s);
        }
    }
    loop {
        let pool: Vec<usize> = (0..instance.n_slots())
            .filter(|&s| !taken[s] && instance.cost(s) <= budget)
            .collect();
        let Some(s) = draw(&pool, &mut rng) else { break };
        budget -= instance.cost(s);
        taken[s] = true;
        picks.push(s);
    }
    evaluate(instance, demand, &ids_of(instance, &picks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::toy_instance;
    use crate::model::{BBox, Slot, Zone};

    #[test]
    fn top_k_on_toy() {
        let (inst, demand) = toy_instance();
        let sol = top_k_baseline(&inst, &demand).unwrap();
        assert_eq!(sol.selected, vec![2, 1, 3, 4]);
        assert_eq!(sol.total_influence, 17.0);
        assert!(sol.feasible);
    }

    fn single_slot(cost: u64) -> Instance {
        Instance::from_triples(
            vec![Slot {
                slot_id: 0,
                billboard_id: 0,
                time_index: 0,
                cost,
                zone_id: 0,
            }],
            vec![Zone {
                zone_id: 0,
                bbox: BBox::new(0.0, 1.0, 0.0, 1.0),
            }],
            1,
            [(0, 0, 0.4)],
        )
        .unwrap()
    }

    #[test]
    fn top_k_single_slot() {
        let inst = single_slot(5);
        let sol = top_k_baseline(&inst, &Demand::budget_only(1, 5)).unwrap();
        assert_eq!(sol.selected, vec![0]);
    }

    #[test]
    fn budget_below_cheapest_slot() {
        let (inst, demand) = toy_instance();
        let tight = Demand {
            budget: 99,
            ..demand
        };
        let sol = top_k_baseline(&inst, &tight).unwrap();
        assert!(sol.selected.is_empty());
        assert!(!sol.feasible);
        let sol = random_baseline(&inst, &tight, 3).unwrap();
        assert!(sol.selected.is_empty());
    }

    #[test]
    fn random_is_seed_deterministic() {
        let (inst, demand) = toy_instance();
        for seed in 0..10 {
            let a = random_baseline(&inst, &demand, seed).unwrap();
            let b = random_baseline(&inst, &demand, seed).unwrap();
            assert_eq!(a, b);
            assert!(a.total_cost <= 1000);
        }
    }

    #[test]
    fn random_mean_stays_below_optimum() {
        let (inst, demand) = toy_instance();
        let loose = Demand::budget_only(3, 700);
        for d in [&demand, &loose] {
            let mean: f64 = (0..1000)
                .map(|seed| random_baseline(&inst, d, seed).unwrap().total_influence)
                .sum::<f64>()
                / 1000.0;
            assert!(mean <= 17.0);
        }
    }
}
