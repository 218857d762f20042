use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::influence::influence_of_indices;
use crate::model::{evaluate, unmet, Demand, Instance, Solution, SlotId};

use super::bounds::{bound_for_completion, estimate, Estimate};
use super::{check_inputs, ids_of, singleton_ratio_order, Estimator, SolverConfig};

/// A frontier entry: fixed picks, slots still open for branching, zonal
/// demand not yet covered by the picks, and the node's upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode {
    pub partial: Vec<SlotId>,
    pub unexplored: Vec<SlotId>,
    pub remaining_demand: Vec<f64>,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// The incumbent reached `theta` times the best open bound.
    Converged,
    /// Every open node was expanded or pruned.
    FrontierEmpty,
    /// Stopped by `node_budget`; the solution is the best found so far.
    NodeBudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub solution: Solution,
    pub nodes_expanded: u64,
    pub status: SearchStatus,
    /// Root node as first pushed.
    pub root: SearchNode,
}

struct Node {
    partial: Vec<usize>,
    cost: u64,
    /// Sorted by descending singleton gain per cost; the head is the next pivot.
    unexplored: Vec<usize>,
    upper: f64,
    /// The estimator's output for this node.
    estimate: Estimate,
    seq: u64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // larger bound first, older node on ties
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .total_cmp(&other.upper)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Incumbent {
    completion: Vec<usize>,
    value: f64,
}

/// Best-first branch and bound.
///
/// Each popped node branches on one pivot (its unexplored slot with the best
/// singleton gain per cost) into an include child, when the pivot fits the
/// budget, and an exclude child. Both are completed by the configured
/// estimator; completions that meet every zonal demand update the incumbent
/// `L_G`, and children whose bound beats `L_G` are pushed. The loop stops once
/// `L_G ≥ θ · U_G`, where `U_G` is the bound of the last popped node.
///
/// Completions that miss a zonal demand are only kept as a fallback answer
/// when no demand-meeting completion is ever found.
pub fn branch_and_bound(instance: &Instance, demand: &Demand, config: &SolverConfig) -> Result<SearchReport> {
    check_inputs(instance, demand)?;
    config.check()?;
    let targets = &demand.sigma;
    let run = |partial: &[usize], unexplored: &[usize]| -> Estimate {
        estimate(
            instance,
            demand,
            config.estimator,
            config.epsilon,
            partial,
            unexplored,
            targets,
        )
    };

    let mut best: Option<Incumbent> = None;
    let mut fallback: Option<Incumbent> = None;
    let mut lower_global = 0.0f64;
    let mut offer = |est: &Estimate, lower_global: &mut f64| {
        let slot = if est.meets_demand { &mut best } else { &mut fallback };
        if slot.as_ref().is_none_or(|inc| est.lower > inc.value) {
            *slot = Some(Incumbent {
                completion: est.completion.clone(),
                value: est.lower,
            });
            if est.meets_demand {
                *lower_global = est.lower;
            }
        }
    };

    // a node is worth keeping only if its open slots can still cover every
    // demand; a child only needs the zones whose pool shrank rechecked
    let reachable = |partial: &[usize], unexplored: &[usize], zones: &[bool]| -> bool {
        demand.demanded_zones().filter(|&z| zones[z]).all(|z| {
            let pool = partial
                .iter()
                .chain(unexplored)
                .copied()
                .filter(|&i| instance.slot(i).zone_id == z);
            !unmet(influence_of_indices(instance, pool), targets[z])
        })
    };
    let all_zones = vec![true; instance.n_zones()];

    let mut seq = 0u64;
    let root_open = singleton_ratio_order(instance, (0..instance.n_slots()).filter(|&i| instance.cost(i) <= demand.budget));
    let root_est = run(&[], &root_open);
    offer(&root_est, &mut lower_global);
    let root = SearchNode {
        partial: Vec::new(),
        unexplored: ids_of(instance, &root_open),
        remaining_demand: demand.sigma.clone(),
        upper: root_est.upper,
    };

    let mut heap = BinaryHeap::new();
    if reachable(&[], &root_open, &all_zones) {
        heap.push(Node {
            partial: Vec::new(),
            cost: 0,
            unexplored: root_open,
            upper: root_est.upper,
            estimate: root_est.clone(),
            seq,
        });
    }

    let mut upper_global = f64::INFINITY;
    let mut expanded = 0u64;
    let status = loop {
        if heap.is_empty() {
            break SearchStatus::FrontierEmpty;
        }
        if lower_global >= config.theta * upper_global {
            break SearchStatus::Converged;
        }
        if config.node_budget.is_some_and(|cap| expanded >= cap) {
            break SearchStatus::NodeBudgetExhausted;
        }
        let node = heap.pop().expect("checked non-empty");
        upper_global = node.upper;
        expanded += 1;
        if node.upper <= lower_global {
            continue;
        }
        let Some((&pivot, rest)) = node.unexplored.split_first() else {
            continue;
        };

        let pivot_cost = instance.cost(pivot);
        if node.cost + pivot_cost <= demand.budget {
            let mut partial = node.partial.clone();
            partial.push(pivot);
            let cost = node.cost + pivot_cost;
            let mut shrunk = vec![false; instance.n_zones()];
            let open: Vec<usize> = rest
                .iter()
                .copied()
                .filter(|&i| {
                    let fits = cost + instance.cost(i) <= demand.budget;
                    if !fits {
                        shrunk[instance.slot(i).zone_id] = true;
                    }
                    fits
                })
                .collect();
            let est = run(&partial, &open);
            offer(&est, &mut lower_global);
            // a child's region lies inside its parent's
            let upper = est.upper.min(node.upper);
            if upper > lower_global && reachable(&partial, &open, &shrunk) {
                seq += 1;
                heap.push(Node {
                    partial,
                    cost,
                    unexplored: open,
                    upper,
                    estimate: est,
                    seq,
                });
            }
        }

        let open = rest.to_vec();
        // Max-gain completion never looks at a slot it did not pick, so
        // dropping an unpicked pivot leaves the completion as it was.
        let est = if config.estimator == Estimator::Fast && !node.estimate.completion.contains(&pivot) {
            let upper = bound_for_completion(instance, demand.budget, &node.partial, &node.estimate.completion, &open);
            Estimate { upper, ..node.estimate }
        } else {
            let est = run(&node.partial, &open);
            offer(&est, &mut lower_global);
            est
        };
        let upper = est.upper.min(node.upper);
        let mut shrunk = vec![false; instance.n_zones()];
        shrunk[instance.slot(pivot).zone_id] = true;
        if upper > lower_global && reachable(&node.partial, &open, &shrunk) {
            seq += 1;
            heap.push(Node {
                partial: node.partial,
                cost: node.cost,
                unexplored: open,
                upper,
                estimate: est,
                seq,
            });
        }
    };

    let chosen = best.or(fallback).map(|inc| inc.completion);
    let solution = evaluate(instance, demand, &ids_of(instance, &chosen.unwrap_or_default()))?;
    Ok(SearchReport {
        solution,
        nodes_expanded: expanded,
        status,
        root,
    })
}
