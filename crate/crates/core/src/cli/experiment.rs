use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::datagen::{generate, scaled_demand, GenParams};
use crate::error::{Error, Result};
use crate::ingest::{build_instance, load_billboards, load_checkins, CheckinRecord, BillboardRecord, IngestConfig};
use crate::model::{Demand, Instance};
use crate::solvers::{run, Algorithm, RunRecord, SolverConfig, EXACT_SLOT_LIMIT};

use super::{load_instance, read_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// A fresh instance per repetition, seeded `params.seed + rep`.
    Generator(GenParams),
    File {
        instance: PathBuf,
        demand: PathBuf,
    },
    Ingest {
        config: IngestConfig,
        billboards: PathBuf,
        checkins: PathBuf,
        demand_fraction: f64,
        budget_fraction: f64,
    },
}

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Absolute budget.
    Budget,
    Theta,
    Epsilon,
    /// Distance threshold in meters; ingest sources only.
    Eta,
    /// Number of demanded zones: zones past this count get zero demand.
    Zones,
    /// Slot count: generated size, or the first slots by id otherwise.
    Slots,
    /// User count: generated size, or the first users by id when ingesting.
    Trajectories,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub source: Source,
    pub algorithms: Vec<Algorithm>,
    pub axis: Axis,
    pub values: Vec<f64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    /// Solver seed for repetition 0; later repetitions add their index.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub node_budget: Option<u64>,
}

fn default_repetitions() -> u32 {
    5
}

fn default_theta() -> f64 {
    SolverConfig::default().theta
}

fn default_epsilon() -> f64 {
    SolverConfig::default().epsilon
}

impl ExperimentSpec {
    pub fn check(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.values.is_empty() {
            return bad("sweep values are empty");
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms listed");
        }
        if self.repetitions == 0 {
            return bad("repetitions must be positive");
        }
        if self.values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return bad("sweep values must be finite and nonnegative");
        }
        let counted = matches!(self.axis, Axis::Budget | Axis::Zones | Axis::Slots | Axis::Trajectories);
        if counted && self.values.iter().any(|v| v.fract() != 0.0) {
            return bad("budget, zones, slots and trajectories take whole numbers");
        }
        match (&self.source, self.axis) {
            (Source::Ingest { .. }, _) => Ok(()),
            (_, Axis::Eta) => bad("the eta axis needs an ingest source"),
            (Source::File { .. }, Axis::Trajectories) => bad("the trajectories axis needs a generator or ingest source"),
            _ => Ok(()),
        }
    }
}

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub axis_value: f64,
    pub algorithm: Algorithm,
    pub rep: u32,
    pub influence: f64,
    pub cost: u64,
    pub feasible: bool,
    pub wall_time_ms: f64,
    pub nodes_expanded: u64,
}

/// One line of `runs.jsonl`: enough to re-evaluate the row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub axis_value: f64,
    pub rep: u32,
    /// Relative to the output directory.
    pub instance: PathBuf,
    pub demand: Demand,
    pub record: RunRecord,
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    axis_value: f64,
    algorithm: Algorithm,
    runs: usize,
    mean_influence: f64,
    mean_cost: f64,
    feasible_rate: f64,
    mean_wall_time_ms: f64,
    mean_nodes_expanded: f64,
}

enum Loaded {
    Generator(GenParams),
    File(Instance, Demand),
    Ingest {
        config: IngestConfig,
        billboards: Vec<BillboardRecord>,
        checkins: Vec<CheckinRecord>,
        demand_fraction: f64,
        budget_fraction: f64,
    },
}

impl Loaded {
    fn open(source: &Source) -> Result<Self> {
        Ok(match source {
            Source::Generator(p) => Loaded::Generator(p.clone()),
            Source::File { instance, demand } => Loaded::File(load_instance(instance)?, read_json(demand)?),
            Source::Ingest {
                config,
                billboards,
                checkins,
                demand_fraction,
                budget_fraction,
            } => Loaded::Ingest {
                config: config.clone(),
                billboards: load_billboards(billboards)?.records,
                checkins: load_checkins(checkins, config)?.records,
                demand_fraction: *demand_fraction,
                budget_fraction: *budget_fraction,
            },
        })
    }

    /// Whether the instance differs between repetitions / sweep values.
    fn varies(&self, axis: Axis) -> (bool, bool) {
        let by_value = matches!(axis, Axis::Slots | Axis::Trajectories | Axis::Eta);
        (matches!(self, Loaded::Generator(_)), by_value)
    }

    fn build(&self, axis: Axis, value: f64, rep: u32) -> Result<(Instance, Demand)> {
        let count = value as usize;
        match self {
            Loaded::Generator(params) => {
                let mut p = params.clone();
                p.seed = p.seed.wrapping_add(rep as u64);
                match axis {
                    Axis::Slots => p.n_slots = count,
                    Axis::Trajectories => p.n_users = count,
                    _ => {}
                }
                generate(&p)
            }
            Loaded::File(instance, demand) => match axis {
                Axis::Slots => {
                    let mut kept = 0;
                    Ok((
                        instance.restrict(|_| {
                            kept += 1;
                            kept <= count
                        }),
                        demand.clone(),
                    ))
                }
                _ => Ok((instance.clone(), demand.clone())),
            },
            Loaded::Ingest {
                config,
                billboards,
                checkins,
                demand_fraction,
                budget_fraction,
            } => {
                let mut config = config.clone();
                if axis == Axis::Eta {
                    config.eta = value;
                }
                let instance = if axis == Axis::Trajectories {
                    let users: BTreeSet<u64> = checkins.iter().map(|c| c.user_id).collect();
                    let keep: BTreeSet<u64> = users.into_iter().take(count).collect();
                    let subset: Vec<CheckinRecord> =
                        checkins.iter().filter(|c| keep.contains(&c.user_id)).cloned().collect();
                    build_instance(billboards, &subset, &config)?
                } else {
                    build_instance(billboards, checkins, &config)?
                };
                let instance = if axis == Axis::Slots {
                    let mut kept = 0;
                    instance.restrict(|_| {
                        kept += 1;
                        kept <= count
                    })
                } else {
                    instance
                };
                let demand = scaled_demand(&instance, *demand_fraction, *budget_fraction);
                Ok((instance, demand))
            }
        }
    }
}

/// Runs the sweep and writes `results.csv`, `summary.csv`, `runs.jsonl` and
/// the instances they refer to under `out`. `node_budget` overrides the
/// spec's cap when set.
pub fn run_experiment(spec: &ExperimentSpec, out: &Path, node_budget: Option<u64>) -> Result<Vec<ResultRow>> {
    spec.check()?;
    let source = Loaded::open(&spec.source)?;
    fs::create_dir_all(out.join("instances"))?;
    let mut results = csv::Writer::from_path(out.join("results.csv"))?;
    let mut runs = std::io::BufWriter::new(fs::File::create(out.join("runs.jsonl"))?);
    let (per_rep, per_value) = source.varies(spec.axis);
    let mut saved: HashMap<(Option<usize>, Option<u32>), PathBuf> = HashMap::new();
    let mut rows = Vec::new();

    for (vi, &value) in spec.values.iter().enumerate() {
        for rep in 0..spec.repetitions {
            let (instance, mut demand) = source.build(spec.axis, value, rep)?;
            match spec.axis {
                Axis::Budget => demand.budget = value as u64,
                Axis::Zones => {
                    let k = value as usize;
                    if k > demand.sigma.len() {
                        return Err(Error::InvalidConfig(format!(
                            "{k} demanded zones requested, instance has {}",
                            demand.sigma.len()
                        )));
                    }
                    demand.sigma.iter_mut().skip(k).for_each(|s| *s = 0.0);
                }
                _ => {}
            }
            if spec.algorithms.contains(&Algorithm::Exact) && instance.n_slots() > EXACT_SLOT_LIMIT {
                return Err(Error::InvalidConfig(format!(
                    "exact is limited to {EXACT_SLOT_LIMIT} slots, instance has {}",
                    instance.n_slots()
                )));
            }

            let key = (per_value.then_some(vi), per_rep.then_some(rep));
            let rel = match saved.get(&key) {
                Some(p) => p.clone(),
                None => {
                    let name = match key {
                        (Some(v), Some(r)) => format!("v{v}_r{r}.json"),
                        (Some(v), None) => format!("v{v}.json"),
                        (None, Some(r)) => format!("r{r}.json"),
                        (None, None) => "instance.json".to_string(),
                    };
                    let rel = PathBuf::from("instances").join(name);
                    fs::write(out.join(&rel), instance.to_json()?)?;
                    saved.insert(key, rel.clone());
                    rel
                }
            };

            let mut config = SolverConfig {
                theta: spec.theta,
                epsilon: spec.epsilon,
                seed: spec.seed.wrapping_add(rep as u64),
                node_budget: node_budget.or(spec.node_budget),
                ..SolverConfig::default()
            };
            match spec.axis {
                Axis::Theta => config.theta = value,
                Axis::Epsilon => config.epsilon = value,
                _ => {}
            }

            for &algorithm in &spec.algorithms {
                let record = run(&instance, &demand, algorithm, &config)?;
                let row = ResultRow {
                    axis_value: value,
                    algorithm,
                    rep,
                    influence: record.influence,
                    cost: record.cost,
                    feasible: record.feasible,
                    wall_time_ms: record.wall_time_ms,
                    nodes_expanded: record.nodes_expanded,
                };
                results.serialize(&row)?;
                let entry = RunEntry {
                    axis_value: value,
                    rep,
                    instance: rel.clone(),
                    demand: demand.clone(),
                    record,
                };
                serde_json::to_writer(&mut runs, &entry)?;
                runs.write_all(b"\n")?;
                rows.push(row);
            }
        }
    }
    results.flush()?;
    runs.flush()?;
    write_summary(spec, &rows, &out.join("summary.csv"))?;
    Ok(rows)
}

fn write_summary(spec: &ExperimentSpec, rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for &value in &spec.values {
        for &algorithm in &spec.algorithms {
            let group: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.axis_value == value && r.algorithm == algorithm)
                .collect();
            let n = group.len();
            if n == 0 {
                continue;
            }
            let mean = |f: fn(&ResultRow) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / n as f64;
            w.serialize(SummaryRow {
                axis_value: value,
                algorithm,
                runs: n,
                mean_influence: mean(|r| r.influence),
                mean_cost: mean(|r| r.cost as f64),
                feasible_rate: mean(|r| r.feasible as u8 as f64),
                mean_wall_time_ms: mean(|r| r.wall_time_ms),
                mean_nodes_expanded: mean(|r| r.nodes_expanded as f64),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}
