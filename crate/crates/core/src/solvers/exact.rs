use crate::error::{Error, Result};
use crate::model::{evaluate, unmet, Demand, Instance, Solution, SlotId};

use super::check_inputs;

pub const EXACT_SLOT_LIMIT: usize = 25;

/// Two incomparable influences closer than this count as a tie.
const TIE_TOL: f64 = 1e-12;

/// Enumerates every subset within budget and returns the feasible one with
/// the largest influence, ties going to the lexicographically smallest id
/// list. With no feasible subset the result is the empty selection flagged
/// infeasible.
pub fn exact_bruteforce(instance: &Instance, demand: &Demand) -> Result<Solution> {
    check_inputs(instance, demand)?;
    let m = instance.n_slots();
    if m > EXACT_SLOT_LIMIT {
        return Err(Error::TooLarge {
            slots: m,
            limit: EXACT_SLOT_LIMIT,
        });
    }
    let mut search = Search {
        instance,
        demand,
        total: Coverage::new(instance.n_users()),
        zonal: (0..instance.n_zones()).map(|_| Coverage::new(instance.n_users())).collect(),
        picked: Vec::new(),
        best: None,
    };
    search.descend(0, 0);
    match search.best {
        Some((_, ids)) => evaluate(instance, demand, &ids),
        None => {
            let mut sol = evaluate(instance, demand, &[])?;
            sol.feasible = false;
            Ok(sol)
        }
    }
}

struct Coverage {
    residual: Vec<f64>,
    value: f64,
    undo: Vec<(u32, f64)>,
}

impl Coverage {
    fn new(n_users: usize) -> Self {
        Coverage {
            residual: vec![1.0; n_users],
            value: 0.0,
            undo: Vec::new(),
        }
    }

    /// Applies a row; returns the undo-log mark to roll back to.
    fn apply(&mut self, row: &[(u32, f64)]) -> (usize, f64) {
        let mark = (self.undo.len(), self.value);
        for &(u, p) in row {
            let r = &mut self.residual[u as usize];
            self.undo.push((u, *r));
            self.value += *r * p;
            *r *= 1.0 - p;
        }
        mark
    }

    fn rollback(&mut self, (len, value): (usize, f64)) {
        while self.undo.len() > len {
            let (u, r) = self.undo.pop().unwrap();
            self.residual[u as usize] = r;
        }
        self.value = value;
    }
}

struct Search<'a> {
    instance: &'a Instance,
    demand: &'a Demand,
    total: Coverage,
    zonal: Vec<Coverage>,
    picked: Vec<usize>,
    best: Option<(f64, Vec<SlotId>)>,
}

impl Search<'_> {
    fn descend(&mut self, next: usize, cost: u64) {
        if next == self.instance.n_slots() {
            self.leaf();
            return;
        }
        let c = self.instance.cost(next);
        if cost + c <= self.demand.budget {
            let row = self.instance.row(next);
            let z = self.instance.slot(next).zone_id;
            let total_mark = self.total.apply(row);
            let zone_mark = self.zonal[z].apply(row);
            self.picked.push(next);
            self.descend(next + 1, cost + c);
            self.picked.pop();
            self.zonal[z].rollback(zone_mark);
            self.total.rollback(total_mark);
        }
        self.descend(next + 1, cost);
    }

    fn leaf(&mut self) {
        let feasible = self
            .zonal
            .iter()
            .zip(&self.demand.sigma)
            .all(|(cov, &want)| !unmet(cov.value, want));
        if !feasible {
            return;
        }
        let value = self.total.value;
        let better = match &self.best {
            None => true,
            Some((best, ids)) => {
                if value > best + TIE_TOL {
                    true
                } else if value >= best - TIE_TOL {
                    let mine: Vec<SlotId> = self.picked.iter().map(|&i| self.instance.slot(i).slot_id).collect();
                    mine < *ids
                } else {
                    false
                }
            }
        };
        if better {
            let ids = self.picked.iter().map(|&i| self.instance.slot(i).slot_id).collect();
            self.best = Some((value, ids));
        }
    }
}
