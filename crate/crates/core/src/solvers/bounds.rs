//! Completion heuristics used at every branch-and-bound node.
//!
//! Both estimators extend a partial selection `P` with slots from the node's
//! unexplored list: first towards each unmet zonal demand (ascending zone
//! id), then over all remaining candidates until the budget runs out. The
//! completion `P^c` gives the lower bound `L = I(P^c)`.
//!
//! The upper bound is a fractional-knapsack relaxation. Any feasible
//! completion `T ⊇ P` drawn from the unexplored slots satisfies, by
//! submodularity,
//!
//! ```text
//! I(T) ≤ I(X) + Σ_{s ∈ T∖X} Δ(s | X)      for X ∈ {P, P^c}
//! ```
//!
//! with `C(T∖X) ≤ B − C(P)`. Relaxing the choice of `T∖X` to a fractional
//! knapsack over single-slot gains gives two valid bounds; `U` is the smaller.
//! When nothing is left to add this collapses to `U = L`.

use crate::error::{Error, Result};
use crate::influence::{influence_of_indices, CoverageState};
use crate::model::{unmet, Demand, Instance, SlotId, FEASIBILITY_TOL};

use super::picker::{LazyPicker, Score};
use super::{ids_of, singleton_ratio_order, Estimator};

/// `e⁻¹ / (1 − e⁻¹)`, scaling the early-stop test of the threshold schedule.
pub const STOP_CONSTANT: f64 = 1.0 / (std::f64::consts::E - 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// `P` followed by the slots the estimator added, in pick order.
    pub completion: Vec<SlotId>,
    /// `I(completion)`.
    pub lower: f64,
    /// Zonal demand still missing after the completion, per zone.
    pub residual_demand: Vec<f64>,
    pub upper: f64,
}

/// `lower + leftover · gain / cost`: a completion's value extended by the
/// unused budget spent at one slot's gain-per-cost rate.
pub fn fractional_extension(lower: f64, leftover: u64, extra_gain: f64, extra_cost: u64) -> f64 {
    lower + leftover as f64 * extra_gain / extra_cost as f64
}

/// Optimum of the fractional knapsack over `(gain, cost)` items: whole items
/// by descending gain per cost, then a fraction of the first that no longer
/// fits.
pub fn knapsack_relaxation(capacity: u64, items: &[(f64, u64)]) -> f64 {
    let mut sorted: Vec<(f64, u64)> = items.iter().copied().filter(|&(g, _)| g > 0.0).collect();
    sorted.sort_unstable_by(|a, b| (b.0 / b.1 as f64).total_cmp(&(a.0 / a.1 as f64)).then(a.1.cmp(&b.1)));
    let mut room = capacity;
    let mut value = 0.0;
    for (gain, cost) in sorted {
        if room == 0 {
            break;
        }
        if cost <= room {
            value += gain;
            room -= cost;
        } else {
            value += fractional_extension(0.0, room, gain, cost);
            break;
        }
    }
    value
}

/// Max-gain completion of `partial`. `residual_demand[z]` is how much zonal
/// influence zone `z` still needs on top of what `partial` provides.
pub fn fast_bound_estimation(
    instance: &Instance,
    demand: &Demand,
    partial: &[SlotId],
    unexplored: &[SlotId],
    residual_demand: &[f64],
) -> Result<BoundResult> {
    let (p, u, targets) = prepare(instance, demand, partial, unexplored, residual_demand)?;
    let est = estimate(instance, demand, Estimator::Fast, 0.0, &p, &u, &targets);
    Ok(est.into_public(instance))
}

/// Threshold-greedy completion of `partial` with decay factor `1 + epsilon`.
pub fn bound_estimation(
    instance: &Instance,
    demand: &Demand,
    partial: &[SlotId],
    unexplored: &[SlotId],
    residual_demand: &[f64],
    epsilon: f64,
) -> Result<BoundResult> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidConfig(format!("epsilon must be positive, got {epsilon}")));
    }
    let (p, u, targets) = prepare(instance, demand, partial, unexplored, residual_demand)?;
    let est = estimate(instance, demand, Estimator::Threshold, epsilon, &p, &u, &targets);
    Ok(est.into_public(instance))
}

type Prepared = (Vec<usize>, Vec<usize>, Vec<f64>);

fn prepare(
    instance: &Instance,
    demand: &Demand,
    partial: &[SlotId],
    unexplored: &[SlotId],
    residual_demand: &[f64],
) -> Result<Prepared> {
    demand.check(instance)?;
    if residual_demand.len() != instance.n_zones() {
        return Err(Error::DemandShape {
            expected: instance.n_zones(),
            got: residual_demand.len(),
        });
    }
    let p = instance.indices_of(partial)?;
    let cost: u64 = p.iter().map(|&i| instance.cost(i)).sum();
    if cost > demand.budget {
        return Err(Error::OverBudget {
            cost,
            budget: demand.budget,
        });
    }
    let mut u = instance.indices_of(unexplored)?;
    u.retain(|i| !p.contains(i));
    u.sort_unstable();
    u.dedup();
    let targets = (0..instance.n_zones())
        .map(|z| {
            let have = influence_of_indices(instance, p.iter().copied().filter(|&i| instance.slot(i).zone_id == z));
            have + residual_demand[z].max(0.0)
        })
        .collect();
    Ok((p, u, targets))
}

/// Index-level estimator output.
#[derive(Debug, Clone)]
pub(crate) struct Estimate {
    pub completion: Vec<usize>,
    pub lower: f64,
    pub upper: f64,
    pub residual: Vec<f64>,
    /// All zonal targets met by the completion.
    pub meets_demand: bool,
}

impl Estimate {
    fn into_public(self, instance: &Instance) -> BoundResult {
        BoundResult {
            completion: ids_of(instance, &self.completion),
            lower: self.lower,
            residual_demand: self.residual,
            upper: self.upper,
        }
    }
}

/// Runs one estimator. `targets[z]` is the zonal influence zone `z` must reach.
pub(crate) fn estimate(
    instance: &Instance,
    demand: &Demand,
    estimator: Estimator,
    epsilon: f64,
    partial: &[usize],
    unexplored: &[usize],
    targets: &[f64],
) -> Estimate {
    let base = CoverageState::with_indices(instance, partial.iter().copied());
    debug_assert!(base.cost() <= demand.budget);
    let mut run = Completion {
        instance,
        cur: base.clone(),
        left: demand.budget - base.cost(),
        candidate: vec![false; instance.n_slots()],
    };
    for &i in unexplored {
        run.candidate[i] = !base.contains_index(i);
    }
    match estimator {
        Estimator::Fast => run.fast(targets),
        Estimator::Threshold => run.threshold(targets, unexplored, epsilon),
    }

    let completion = run.cur;
    let upper = upper_bound(instance, demand.budget, &base, &completion, unexplored);
    let residual: Vec<f64> = (0..instance.n_zones())
        .map(|z| {
            let got = zonal(instance, &completion, z);
            (targets[z] - got).max(0.0)
        })
        .collect();
    let meets_demand = residual.iter().all(|&r| r <= FEASIBILITY_TOL);
    Estimate {
        lower: completion.influence(),
        completion: completion.member_indices().to_vec(),
        upper,
        residual,
        meets_demand,
    }
}

/// Upper bound for a known completion of `partial` over `unexplored`.
pub(crate) fn bound_for_completion(
    instance: &Instance,
    budget: u64,
    partial: &[usize],
    completion: &[usize],
    unexplored: &[usize],
) -> f64 {
    let base = CoverageState::with_indices(instance, partial.iter().copied());
    let done = CoverageState::with_indices(instance, completion.iter().copied());
    upper_bound(instance, budget, &base, &done, unexplored)
}

fn zonal(instance: &Instance, state: &CoverageState<'_>, zone: usize) -> f64 {
    influence_of_indices(
        instance,
        state.member_indices().iter().copied().filter(|&i| instance.slot(i).zone_id == zone),
    )
}

fn upper_bound(
    instance: &Instance,
    budget: u64,
    partial: &CoverageState<'_>,
    completion: &CoverageState<'_>,
    unexplored: &[usize],
) -> f64 {
    let capacity = budget - partial.cost();
    let relax = |from: &CoverageState<'_>| {
        let items: Vec<(f64, u64)> = unexplored
            .iter()
            .copied()
            .filter(|&i| !from.contains_index(i) && instance.cost(i) <= capacity)
            .map(|i| (from.gain_index(i), instance.cost(i)))
            .collect();
        from.influence() + knapsack_relaxation(capacity, &items)
    };
    let via_completion = relax(completion);
    let via_partial = relax(partial);
    via_completion.min(via_partial).max(completion.influence())
}

struct Completion<'a> {
    instance: &'a Instance,
    cur: CoverageState<'a>,
    left: u64,
    candidate: Vec<bool>,
}

impl<'a> Completion<'a> {
    fn take(&mut self, s: usize) {
        self.left -= self.instance.cost(s);
        self.candidate[s] = false;
        self.cur.commit_index(s);
    }

    fn zone_state(&self, zone: usize) -> CoverageState<'a> {
        CoverageState::with_indices(
            self.instance,
            self.cur
                .member_indices()
                .iter()
                .copied()
                .filter(|&i| self.instance.slot(i).zone_id == zone),
        )
    }

    fn fast(&mut self, targets: &[f64]) {
        let instance = self.instance;
        for (z, &target) in targets.iter().enumerate() {
            let mut zone = self.zone_state(z);
            if !unmet(zone.influence(), target) {
                continue;
            }
            let pool = (0..instance.n_slots()).filter(|&i| self.candidate[i] && instance.slot(i).zone_id == z);
            let mut picker = LazyPicker::new(Score::Gain, &self.cur, pool);
            while unmet(zone.influence(), target) && self.left > 0 {
                let Some(b) = picker.pop(&self.cur) else { break };
                self.candidate[b] = false;
                if instance.cost(b) <= self.left {
                    self.take(b);
                    zone.commit_index(b);
                }
            }
        }

        let pool = (0..instance.n_slots()).filter(|&i| self.candidate[i]);
        let mut picker = LazyPicker::new(Score::Gain, &self.cur, pool);
        while self.left > 0 && !picker.is_empty() {
            let Some(b) = picker.pop(&self.cur) else { break };
            self.candidate[b] = false;
            if instance.cost(b) <= self.left {
                self.take(b);
            }
        }
    }

    fn threshold(&mut self, targets: &[f64], unexplored: &[usize], epsilon: f64) {
        let instance = self.instance;
        let order = singleton_ratio_order(instance, unexplored.iter().copied().filter(|&i| self.candidate[i]));
        let mut tau = order
            .iter()
            .map(|&b| self.cur.gain_index(b) / instance.cost(b) as f64)
            .fold(0.0, f64::max);

        let base = self.cur.influence();
        let base_budget = self.left;
        for (z, &target) in targets.iter().enumerate() {
            let mut zone = self.zone_state(z);
            if !unmet(zone.influence(), target) {
                continue;
            }
            let zone_order: Vec<usize> = order.iter().copied().filter(|&b| instance.slot(b).zone_id == z).collect();
            self.passes(&zone_order, &mut tau, epsilon, base, base_budget, Some((&mut zone, target)));
        }

        let base = self.cur.influence();
        let base_budget = self.left;
        self.passes(&order, &mut tau, epsilon, base, base_budget, None);
    }

    /// Repeated scans of `order` under a decaying threshold `tau`. A scan
    /// accepts each affordable candidate whose gain per cost reaches `tau`
    /// and stops at the first affordable one that does not.
    fn passes(
        &mut self,
        order: &[usize],
        tau: &mut f64,
        epsilon: f64,
        base: f64,
        base_budget: u64,
        mut zone: Option<(&mut CoverageState<'a>, f64)>,
    ) {
        let instance = self.instance;
        let zone_met = |zone: &Option<(&mut CoverageState<'a>, f64)>| {
            zone.as_ref().is_some_and(|(st, target)| !unmet(st.influence(), *target))
        };
        loop {
            if self.left == 0 || !(*tau > 0.0) || zone_met(&zone) {
                return;
            }
            let mut added = false;
            let mut affordable = false;
            let mut stalled = false;
            for &b in order {
                if !self.candidate[b] || instance.cost(b) > self.left {
                    continue;
                }
                affordable = true;
                let gain = self.cur.gain_index(b);
                if gain / instance.cost(b) as f64 >= *tau {
                    self.take(b);
                    added = true;
                    if let Some((st, _)) = zone.as_mut() {
                        st.commit_index(b);
                    }
                    if zone_met(&zone) {
                        return;
                    }
                } else {
                    stalled = gain <= 0.0;
                    break;
                }
            }
            // nothing can ever pass again
            if !affordable || (!added && stalled) {
                return;
            }
            *tau /= 1.0 + epsilon;
            if base_budget > 0 && *tau <= (self.cur.influence() - base) / base_budget as f64 * STOP_CONSTANT {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::toy_instance;

    #[test]
    fn stop_constant_value() {
        let e1 = (-1.0f64).exp();
        assert!((STOP_CONSTANT - e1 / (1.0 - e1)).abs() < 1e-15);
        assert!((STOP_CONSTANT - 0.581977).abs() < 1e-6);
    }

    #[test]
    fn extension_arithmetic() {
        assert_eq!(fractional_extension(10.0, 20, 5.0, 40), 12.5);
        assert_eq!(knapsack_relaxation(20, &[(5.0, 40)]), 2.5);
        assert_eq!(knapsack_relaxation(0, &[(5.0, 4)]), 0.0);
        // whole 6/3, whole 4/4, half of 3/6 with 3 units left
        let items = [(3.0, 6), (6.0, 3), (4.0, 4)];
        assert_eq!(knapsack_relaxation(10, &items), 11.5);
    }

    #[test]
    fn fast_toy_root() {
        let (inst, demand) = toy_instance();
        let r = fast_bound_estimation(&inst, &demand, &[], &[1, 2, 3, 4], &demand.sigma).unwrap();
        assert_eq!(r.completion, vec![2, 1, 3, 4]);
        assert_eq!(r.lower, 17.0);
        assert_eq!(r.upper, 17.0);
        assert_eq!(r.residual_demand, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn threshold_toy_root() {
        let (inst, demand) = toy_instance();
        let r = bound_estimation(&inst, &demand, &[], &[1, 2, 3, 4], &demand.sigma, 0.1).unwrap();
        assert_eq!(r.completion, vec![1, 2, 3, 4]);
        assert_eq!(r.lower, 17.0);
        assert_eq!(r.upper, 17.0);
    }

    #[test]
    fn initial_threshold_on_toy() {
        let (inst, _) = toy_instance();
        let st = CoverageState::new(&inst);
        let tau = (0..4)
            .map(|i| st.gain_index(i) / inst.cost(i) as f64)
            .fold(0.0, f64::max);
        assert_eq!(tau, 0.02);
    }

    #[test]
    fn nothing_left_means_upper_equals_lower() {
        let (inst, demand) = toy_instance();
        for r in [
            fast_bound_estimation(&inst, &demand, &[3], &[], &[0.0; 3]).unwrap(),
            bound_estimation(&inst, &demand, &[3], &[], &[0.0; 3], 0.1).unwrap(),
        ] {
            assert_eq!(r.completion, vec![3]);
            assert_eq!(r.lower, 7.0);
            assert_eq!(r.upper, r.lower);
        }
    }

    #[test]
    fn leftover_budget_is_priced_fractionally() {
        // b3 alone in the partial (cost 400, budget 500): b1 fits, leaving 0
        let (inst, mut demand) = toy_instance();
        demand.budget = 500;
        demand.sigma = vec![0.0; 3];
        let r = fast_bound_estimation(&inst, &demand, &[3], &[1, 2, 4], &[0.0; 3]).unwrap();
        // max gain first: b4 (5) and b2 (3) do not fit, b1 does
        assert_eq!(r.completion, vec![3, 1]);
        assert_eq!(r.lower, 9.0);
        // via P: 7 + knapsack(100, {b1 2/100}) = 9 ; via P^c: 9 + 0
        assert_eq!(r.upper, 9.0);
    }

    #[test]
    fn over_budget_partial_is_rejected() {
        let (inst, mut demand) = toy_instance();
        demand.budget = 300;
        assert!(matches!(
            fast_bound_estimation(&inst, &demand, &[3], &[1], &[0.0; 3]),
            Err(Error::OverBudget { cost: 400, budget: 300 })
        ));
    }

    #[test]
    fn residual_demand_reports_shortfall() {
        let (inst, mut demand) = toy_instance();
        demand.budget = 300;
        let r = bound_estimation(&inst, &demand, &[], &[1, 2, 3, 4], &demand.sigma, 0.1).unwrap();
        // zone 0 can be served (cost 300), zone 1 then has no budget left
        assert_eq!(r.residual_demand, vec![0.0, 7.0, 0.0]);
    }
}
