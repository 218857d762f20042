mod common;

use common::{oracle_cost, oracle_feasible, oracle_influence, oracle_optimum, positions, small_params, TOL};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zonesel::datagen::generate;
use zonesel::influence::influence_of;
use zonesel::model::{Demand, Instance, SlotId};
use zonesel::solvers::{bound_estimation, fast_bound_estimation, run, Algorithm, SolverConfig};

fn instance(seed: u64, max_slots: usize, demand: bool) -> (Instance, Demand) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate(&small_params(&mut rng, max_slots, demand)).unwrap()
}

fn ids(inst: &Instance) -> Vec<SlotId> {
    inst.slots().iter().map(|s| s.slot_id).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solvers_respect_budget_and_report_truthfully(seed in any::<u64>(), solver_seed in 0u64..100) {
        let (inst, demand) = instance(seed, 10, true);
        let config = SolverConfig { seed: solver_seed, ..SolverConfig::default() };
        for algo in Algorithm::ALL {
            let rec = run(&inst, &demand, algo, &config).unwrap();
            let picks = positions(&inst, &rec.selected);
            prop_assert!(oracle_cost(&inst, &picks) <= demand.budget, "{algo} over budget");
            prop_assert_eq!(rec.cost, oracle_cost(&inst, &picks));
            prop_assert!((rec.influence - oracle_influence(&inst, &picks)).abs() <= TOL);
            prop_assert_eq!(rec.feasible, oracle_feasible(&inst, &demand, &picks), "{} feasibility flag", algo);
        }
    }

    #[test]
    fn exact_matches_enumeration(seed in any::<u64>()) {
        let (inst, demand) = instance(seed, 9, true);
        let rec = run(&inst, &demand, Algorithm::Exact, &SolverConfig::default()).unwrap();
        match oracle_optimum(&inst, &demand) {
            Some(opt) => prop_assert!((rec.influence - opt).abs() <= TOL && rec.feasible),
            None => prop_assert!(!rec.feasible),
        }
    }

    #[test]
    fn root_bounds_bracket_the_optimum(seed in any::<u64>(), eps in 0.05f64..1.0) {
        let (inst, demand) = instance(seed, 10, true);
        let Some(opt) = oracle_optimum(&inst, &demand) else { return Ok(()); };
        let all = ids(&inst);
        for b in [
            fast_bound_estimation(&inst, &demand, &[], &all, &demand.sigma).unwrap(),
            bound_estimation(&inst, &demand, &[], &all, &demand.sigma, eps).unwrap(),
        ] {
            prop_assert!(b.upper >= opt - TOL, "upper {} below optimum {}", b.upper, opt);
            let picks = positions(&inst, &b.completion);
            if oracle_feasible(&inst, &demand, &picks) {
                prop_assert!(b.lower <= opt + TOL);
            }
            prop_assert!(b.lower <= b.upper + TOL);
        }
    }

    #[test]
    fn influence_is_monotone_submodular(seed in any::<u64>(), mask_a in any::<u16>(), mask_b in any::<u16>(), s in 0usize..16) {
        let (inst, _) = instance(seed, 12, false);
        let all = ids(&inst);
        let m = all.len();
        let pick = |mask: u16| -> Vec<SlotId> { (0..m).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect() };
        let small = pick(mask_a & mask_b);
        let large = pick(mask_b);
        let extra = all[s % m];
        let with = |set: &[SlotId]| {
            let mut v = set.to_vec();
            if !v.contains(&extra) { v.push(extra); }
            influence_of(&inst, &v).unwrap()
        };
        let (i_small, i_large) = (influence_of(&inst, &small).unwrap(), influence_of(&inst, &large).unwrap());
        prop_assert!(i_small <= i_large + TOL);
        prop_assert!(with(&small) - i_small >= with(&large) - i_large - TOL);
    }
}
