use crate::error::Result;
use crate::influence::CoverageState;
use crate::model::{evaluate, unmet, Demand, Instance, Solution};

use super::picker::{LazyPicker, Score};
use super::{check_inputs, ids_of};

/// Runs the zone-then-fill greedy twice, once picking by gain per cost and
/// once by raw gain, each with the full budget, and returns the run with the
/// larger total influence (the ratio run on ties).
pub fn simple_greedy(instance: &Instance, demand: &Demand) -> Result<Solution> {
    check_inputs(instance, demand)?;
    let (by_ratio, ratio_influence) = zone_then_fill(instance, demand, Score::Ratio);
    let (by_gain, gain_influence) = zone_then_fill(instance, demand, Score::Gain);
    let chosen = if gain_influence > ratio_influence {
        by_gain
    } else {
        by_ratio
    };
    evaluate(instance, demand, &ids_of(instance, &chosen))
}

/// One strategy. Each demanded zone (ascending) is served from its own slots,
/// scoring gains against the zone's own picks, until its demand is met or its
/// slots run out. Leftover budget is then spent over every remaining slot,
/// scoring gains against the whole selection. A best candidate that no longer
/// fits the budget is discarded.
pub(crate) fn zone_then_fill(instance: &Instance, demand: &Demand, score: Score) -> (Vec<usize>, f64) {
    let zones = instance.zone_members();
    let mut budget = demand.budget;
    let mut available = vec![true; instance.n_slots()];
    let mut chosen = CoverageState::new(instance);

    for z in demand.demanded_zones() {
        let mut local = CoverageState::new(instance);
        let mut picker = LazyPicker::new(score, &local, zones[z].iter().copied());
        while unmet(local.influence(), demand.sigma[z]) {
            let Some(s) = picker.pop(&local) else { break };
            available[s] = false;
            let c = instance.cost(s);
            if c <= budget {
                local.commit_index(s);
                chosen.commit_index(s);
                budget -= c;
            }
        }
    }

    let mut picker = LazyPicker::new(score, &chosen, (0..instance.n_slots()).filter(|&i| available[i]));
    while budget > 0 {
        let Some(s) = picker.pop(&chosen) else { break };
        let c = instance.cost(s);
        if c <= budget {
            chosen.commit_index(s);
            budget -= c;
        }
    }
    (chosen.member_indices().to_vec(), chosen.influence())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::toy_instance;
    use crate::model::{BBox, Slot, Zone};

    #[test]
    fn toy_reaches_the_optimum() {
        let (inst, demand) = toy_instance();
        let sol = simple_greedy(&inst, &demand).unwrap();
        assert_eq!(sol.sorted_selection(), vec![1, 2, 3, 4]);
        assert_eq!(sol.total_influence, 17.0);
        assert_eq!(sol.total_cost, 1000);
        assert!(sol.feasible);
    }

    #[test]
    fn zero_budget_selects_nothing() {
        let (inst, _) = toy_instance();
        let demand = Demand::budget_only(3, 0);
        let sol = simple_greedy(&inst, &demand).unwrap();
        assert!(sol.selected.is_empty());
        assert_eq!(sol.total_influence, 0.0);
        assert!(sol.feasible);
    }

    #[test]
    fn ratio_strategy_follows_cost_effectiveness() {
        let (inst, demand) = toy_instance();
        let (order, _) = zone_then_fill(&inst, &demand, Score::Ratio);
        // zone 0: b1 (0.02) before b2 (0.015)
        assert_eq!(ids_of(&inst, &order), vec![1, 2, 3, 4]);
        let (order, _) = zone_then_fill(&inst, &demand, Score::Gain);
        assert_eq!(ids_of(&inst, &order), vec![2, 1, 3, 4]);
    }

    /// One expensive slot reaching 100 users against ten cheap slots reaching
    /// 9 each: the ratio run buys the cheap ones, the gain run the big one.
    #[test]
    fn gain_strategy_wins_when_ratio_misleads() {
        let mut slots = vec![Slot {
            slot_id: 0,
            billboard_id: 0,
            time_index: 0,
            cost: 100,
            zone_id: 0,
        }];
        let mut triples: Vec<(u32, u32, f64)> = (0..100).map(|u| (0, u, 1.0)).collect();
        for k in 1..=10u32 {
            slots.push(Slot {
                slot_id: k,
                billboard_id: k,
                time_index: 0,
                cost: 8,
                zone_id: 0,
            });
            for u in 0..9 {
                triples.push((k, 100 + (k - 1) * 9 + u, 1.0));
            }
        }
        let zones = vec![Zone {
            zone_id: 0,
            bbox: BBox::new(0.0, 1.0, 0.0, 1.0),
        }];
        let inst = Instance::from_triples(slots, zones, 190, triples).unwrap();
        let demand = Demand::budget_only(1, 100);

        let (_, ratio_infl) = zone_then_fill(&inst, &demand, Score::Ratio);
        let (_, gain_infl) = zone_then_fill(&inst, &demand, Score::Gain);
        assert_eq!(ratio_infl, 90.0);
        assert_eq!(gain_infl, 100.0);

        let sol = simple_greedy(&inst, &demand).unwrap();
        assert_eq!(sol.selected, vec![0]);
        assert_eq!(sol.total_influence, ratio_infl.max(gain_infl));
    }

    #[test]
    fn unreachable_demand_is_reported_infeasible() {
        let (inst, _) = toy_instance();
        let demand = Demand::new(vec![100.0, 0.0, 0.0], 1000);
        let sol = simple_greedy(&inst, &demand).unwrap();
        assert!(!sol.feasible);
        assert!(sol.total_cost <= 1000);
    }
}
