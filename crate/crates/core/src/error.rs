use std::path::PathBuf;

use crate::model::{SlotId, Violation, ZoneId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown slot id {0}")]
    UnknownSlotId(SlotId),

    #[error("unknown zone {0}")]
    UnknownZone(ZoneId),

    #[error("slot {0} is already selected")]
    AlreadySelected(SlotId),

    #[error("exhaustive search is limited to {limit} slots, instance has {slots}")]
    TooLarge { slots: usize, limit: usize },

    #[error("demand has {got} zone entries but the instance has {expected} zones")]
    DemandShape { expected: usize, got: usize },

    #[error("demand for zone {zone} is not a nonnegative finite number")]
    InvalidDemand { zone: ZoneId },

    #[error("partial selection costs {cost}, over the budget {budget}")]
    OverBudget { cost: u64, budget: u64 },

    #[error("instance failed validation: {}", .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidInstance(Vec<Violation>),

    #[error("matrix has {rows} rows for {slots} slots")]
    RowCountMismatch { rows: usize, slots: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("{}: expected header starting with `{expected}`, found `{found}`", .path.display())]
    HeaderMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("billboard {billboard_id} at ({lat}, {lon}) lies outside the zone grid")]
    OutOfGrid { billboard_id: u32, lat: f64, lon: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
