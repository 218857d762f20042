//! Slot selection algorithms.
//!
//! * [`simple_greedy`]: two-strategy greedy (cost-ratio and raw-gain), best of both.
//! * [`branch_and_bound`]: best-first search over include/exclude branches,
//!   bounded by [`fast_bound_estimation`] or the threshold-greedy
//!   [`bound_estimation`].
//! * [`top_k_baseline`] and [`random_baseline`].
//! * [`exact_bruteforce`]: exhaustive oracle for small instances.
//!
//! Every solver returns a [`Solution`](crate::model::Solution) whose cost never exceeds the budget.
//! When zonal demands cannot be met the solution is still returned, with
//! `feasible == false`.

mod baselines;
mod bounds;
mod branch_and_bound;
mod exact;
mod greedy;
mod picker;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_instance, Demand, Instance, SlotId};

pub use baselines::{random_baseline, top_k_baseline};
pub use bounds::{
    bound_estimation, fast_bound_estimation, fractional_extension, knapsack_relaxation, BoundResult,
    STOP_CONSTANT,
};
pub use branch_and_bound::{branch_and_bound, SearchNode, SearchReport, SearchStatus};
pub use exact::{exact_bruteforce, EXACT_SLOT_LIMIT};
pub use greedy::simple_greedy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    /// Max-gain completion.
    Fast,
    /// Decaying-threshold completion on gain per cost.
    Threshold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stop once the incumbent reaches `theta` times the popped bound.
    pub theta: f64,
    /// Threshold decay `τ ← τ / (1 + ε)`.
    pub epsilon: f64,
    pub estimator: Estimator,
    pub seed: u64,
    /// Maximum number of node expansions; `None` is unbounded.
    pub node_budget: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            theta: 0.7,
            epsilon: 0.1,
            estimator: Estimator::Threshold,
            seed: 0,
            node_budget: None,
        }
    }
}

impl SolverConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::InvalidConfig(format!("theta must lie in (0, 1], got {}", self.theta)));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    /// Branch and bound with the threshold estimator.
    Bbs,
    /// Branch and bound with the fast estimator.
    Bfbs,
    Topk,
    Random,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Greedy,
        Algorithm::Bbs,
        Algorithm::Bfbs,
        Algorithm::Topk,
        Algorithm::Random,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Bbs => "bbs",
            Algorithm::Bfbs => "bfbs",
            Algorithm::Topk => "topk",
            Algorithm::Random => "random",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}

/// One solver invocation as written to result files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub config: SolverConfig,
    pub selected: Vec<SlotId>,
    pub cost: u64,
    pub influence: f64,
    pub zonal_influence: Vec<f64>,
    pub feasible: bool,
    pub nodes_expanded: u64,
    pub wall_time_ms: f64,
    /// Set when branch and bound stopped on its node budget.
    #[serde(default)]
    pub node_budget_exhausted: bool,
}

/// Runs `algorithm` and times the solver call alone.
pub fn run(instance: &Instance, demand: &Demand, algorithm: Algorithm, config: &SolverConfig) -> Result<RunRecord> {
    let mut config = config.clone();
    match algorithm {
        Algorithm::Bbs => config.estimator = Estimator::Threshold,
        Algorithm::Bfbs => config.estimator = Estimator::Fast,
        _ => {}
    }
    let start = Instant::now();
    let (solution, nodes, exhausted) = match algorithm {
        Algorithm::Greedy => (simple_greedy(instance, demand)?, 0, false),
        Algorithm::Topk => (top_k_baseline(instance, demand)?, 0, false),
        Algorithm::Random => (random_baseline(instance, demand, config.seed)?, 0, false),
        Algorithm::Exact => (exact_bruteforce(instance, demand)?, 0, false),
        Algorithm::Bbs | Algorithm::Bfbs => {
            let report = branch_and_bound(instance, demand, &config)?;
            let exhausted = report.status == SearchStatus::NodeBudgetExhausted;
            (report.solution, report.nodes_expanded, exhausted)
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunRecord {
        algorithm,
        config,
        selected: solution.selected,
        cost: solution.total_cost,
        influence: solution.total_influence,
        zonal_influence: solution.zonal_influence,
        feasible: solution.feasible,
        nodes_expanded: nodes,
        wall_time_ms,
        node_budget_exhausted: exhausted,
    })
}

pub(crate) fn check_inputs(instance: &Instance, demand: &Demand) -> Result<()> {
    demand.check(instance)?;
    let violations = validate_instance(instance);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInstance(violations))
    }
}

/// Slot indices by descending `I({s}) / C(s)`, ties by index.
pub(crate) fn singleton_ratio_order(instance: &Instance, pool: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let ratio = |i: usize| instance.singleton_influence(i) / instance.cost(i) as f64;
    let mut v: Vec<usize> = pool.into_iter().collect();
    v.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)).then(a.cmp(&b)));
    v
}

/// Slot indices by descending `I({s})`, ties by index.
pub(crate) fn singleton_order(instance: &Instance, pool: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = pool.into_iter().collect();
    v.sort_by(|&a, &b| {
        instance
            .singleton_influence(b)
            .total_cmp(&instance.singleton_influence(a))
            .then(a.cmp(&b))
    });
    v
}

pub(crate) fn ids_of(instance: &Instance, indices: &[usize]) -> Vec<SlotId> {
    indices.iter().map(|&i| instance.slot(i).slot_id).collect()
}
