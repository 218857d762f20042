//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 when the returned selection misses a zonal
//! demand (or `validate` finds violations), 1 on any error.

mod experiment;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::datagen::{generate, GenParams};
use crate::error::{Error, Result};
use crate::ingest::{ingest_files, write_rejected, IngestConfig};
use crate::model::{validate_instance, Demand, Instance};
use crate::solvers::{run, Algorithm, SolverConfig};

pub use experiment::{run_experiment, Axis, ExperimentSpec, ResultRow, RunEntry, Source};

pub const NODE_BUDGET_ENV: &str = "ZONESEL_NODE_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "zonesel", version, about = "Billboard slot selection under zonal influence demands")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance and print the run record as JSON.
    Solve(SolveArgs),
    /// Run a parameter sweep described by a JSON spec.
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic instance.
    Gen(GenArgs),
    /// Build an instance from billboard and check-in CSVs.
    Ingest {
        /// Ingest configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        billboards: PathBuf,
        #[arg(long)]
        checkins: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print structural violations of an instance file.
    Validate {
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Per-zone demands, comma separated. Overrides `--demand-file`.
    #[arg(long, value_delimiter = ',')]
    pub demand: Option<Vec<f64>>,
    /// JSON with `sigma` and `budget`, as written by `gen`.
    #[arg(long)]
    pub demand_file: Option<PathBuf>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value = "bbs")]
    pub algo: String,
    #[arg(long, default_value_t = 0.7)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Full generator parameters (JSON); the flags below override it.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub slots: Option<usize>,
    #[arg(long)]
    pub users: Option<usize>,
    #[arg(long)]
    pub zones: Option<usize>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub demand_fraction: Option<f64>,
    #[arg(long)]
    pub budget_fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving `instance.json` and `demand.json`.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Solve(args) => solve(args),
        Command::Experiment { spec, out } => {
            let spec: ExperimentSpec = read_json(&spec)?;
            run_experiment(&spec, &out, node_budget_from_env()?)?;
            Ok(EXIT_OK)
        }
        Command::Gen(args) => gen(args),
        Command::Ingest {
            config,
            billboards,
            checkins,
            out,
        } => {
            let config: IngestConfig = read_json(&config)?;
            let (instance, report) = ingest_files(billboards, checkins, &config)?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("instance.json"), instance.to_json()?)?;
            write_rejected(out.join("rejected_billboards.csv"), &report.billboards_rejected)?;
            write_rejected(out.join("rejected_checkins.csv"), &report.checkins_rejected)?;
            eprintln!(
                "{} slots, {} users, {} zones; rejected {} billboard rows, {} check-in rows",
                instance.n_slots(),
                instance.n_users(),
                instance.n_zones(),
                report.billboards_rejected.len(),
                report.checkins_rejected.len()
            );
            Ok(EXIT_OK)
        }
        Command::Validate { instance } => {
            let instance = load_instance(&instance)?;
            let violations = validate_instance(&instance);
            print_json(&violations)?;
            Ok(if violations.is_empty() { EXIT_OK } else { EXIT_INFEASIBLE })
        }
    }
}

fn solve(args: SolveArgs) -> Result<i32> {
    let algorithm: Algorithm = args.algo.parse()?;
    let instance = load_instance(&args.instance)?;
    let file_demand: Option<Demand> = args.demand_file.as_deref().map(read_json).transpose()?;
    let sigma = args
        .demand
        .or_else(|| file_demand.as_ref().map(|d| d.sigma.clone()))
        .unwrap_or_else(|| vec![0.0; instance.n_zones()]);
    let budget = args
        .budget
        .or(file_demand.map(|d| d.budget))
        .ok_or_else(|| Error::InvalidConfig("a budget is required (--budget or --demand-file)".into()))?;
    let config = SolverConfig {
        theta: args.theta,
        epsilon: args.epsilon,
        seed: args.seed,
        node_budget: node_budget_from_env()?,
        ..SolverConfig::default()
    };
    let record = run(&instance, &Demand::new(sigma, budget), algorithm, &config)?;
    print_json(&record)?;
    Ok(if record.feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn gen(args: GenArgs) -> Result<i32> {
    let mut params: GenParams = match &args.params {
        Some(p) => read_json(p)?,
        None => GenParams::default(),
    };
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => {
            $(if let Some(v) = args.$flag { params.$field = v; })*
        };
    }
    set!(slots => n_slots, users => n_users, zones => n_zones, density => coverage_density,
         demand_fraction => demand_fraction, budget_fraction => budget_fraction, seed => seed);
    let (instance, demand) = generate(&params)?;
    fs::create_dir_all(&args.out)?;
    fs::write(args.out.join("instance.json"), instance.to_json()?)?;
    fs::write(args.out.join("demand.json"), serde_json::to_string_pretty(&demand)?)?;
    Ok(EXIT_OK)
}

pub fn node_budget_from_env() -> Result<Option<u64>> {
    match std::env::var(NODE_BUDGET_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidConfig(format!("{NODE_BUDGET_ENV}=`{v}` is not a count"))),
        _ => Ok(None),
    }
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub(crate) fn load_instance(path: &Path) -> Result<Instance> {
    Instance::from_json(&read_text(path)?)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}
