//! Domain types shared by every solver: slots, zones, the sparse slot/user
//! influence matrix, advertiser demands and evaluated solutions.
//!
//! Slots inside an [`Instance`] are kept sorted by `slot_id`, so a slot's
//! position (its "index") orders the same way as its id. Solvers work on
//! indices internally and break argmax ties towards the lowest index.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::influence;

pub type SlotId = u32;
pub type ZoneId = usize;
pub type UserId = u32;

/// Absolute slack used when comparing a zonal influence against its demand.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// One billboard for one time window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub slot_id: SlotId,
    pub billboard_id: u32,
    /// Window start as a multiple of the slot duration.
    pub time_index: u32,
    pub cost: u64,
    pub zone_id: ZoneId,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct BBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BBox {
    pub fn new(lat_min: f64, lat_max: f64, lon_min: f64, lon_max: f64) -> Self {
        BBox {
            lat_min,
            lat_max,
            lon_min,
            lon_max,
        }
    }

    /// Half-open overlap test, so grid cells sharing an edge do not overlap.
    pub fn overlaps(&self, other: &BBox) -> bool {
        self.lat_min < other.lat_max
            && other.lat_min < self.lat_max
            && self.lon_min < other.lon_max
            && other.lon_min < self.lon_max
    }
}

impl From<[f64; 4]> for BBox {
    fn from(v: [f64; 4]) -> Self {
        BBox::new(v[0], v[1], v[2], v[3])
    }
}

impl From<BBox> for [f64; 4] {
    fn from(b: BBox) -> Self {
        [b.lat_min, b.lat_max, b.lon_min, b.lon_max]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub zone_id: ZoneId,
    pub bbox: BBox,
}

/// Sparse `Pr(slot, user)` incidence. Row `i` belongs to the slot at index `i`
/// of the owning instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceMatrix {
    n_users: usize,
    rows: Vec<Vec<(UserId, f64)>>,
}

impl InfluenceMatrix {
    pub fn new(n_users: usize, rows: Vec<Vec<(UserId, f64)>>) -> Self {
        InfluenceMatrix { n_users, rows }
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn rows(&self) -> &[Vec<(UserId, f64)>] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &[(UserId, f64)] {
        &self.rows[index]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// A complete problem instance. Immutable once built.
#[derive(Debug, Clone)]
pub struct Instance {
    slots: Vec<Slot>,
    zones: Vec<Zone>,
    matrix: InfluenceMatrix,
    index: HashMap<SlotId, usize>,
    singleton: Vec<f64>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.slots == other.slots && self.zones == other.zones && self.matrix == other.matrix
    }
}

impl Instance {
    /// `matrix` rows are aligned with `slots` as given. Both are reordered by
    /// `slot_id`, and each row by user id.
    pub fn new(slots: Vec<Slot>, zones: Vec<Zone>, matrix: InfluenceMatrix) -> Result<Self> {
        if matrix.rows.len() != slots.len() {
            return Err(Error::RowCountMismatch {
                rows: matrix.rows.len(),
                slots: slots.len(),
            });
        }
        let n_users = matrix.n_users;
        let mut paired: Vec<(Slot, Vec<(UserId, f64)>)> =
            slots.into_iter().zip(matrix.rows).collect();
        paired.sort_by_key(|(s, _)| s.slot_id);
        let (slots, mut rows): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
        for row in &mut rows {
            row.sort_by_key(|&(u, _)| u);
        }
        let mut index = HashMap::with_capacity(slots.len());
        for (i, s) in slots.iter().enumerate() {
            index.entry(s.slot_id).or_insert(i);
        }
        let singleton = rows
            .iter()
            .map(|r| r.iter().map(|&(_, p)| p).sum())
            .collect();
        Ok(Instance {
            slots,
            zones,
            matrix: InfluenceMatrix::new(n_users, rows),
            index,
            singleton,
        })
    }

    /// Builds the matrix from `(slot_id, user_id, prob)` triples.
    pub fn from_triples(
        slots: Vec<Slot>,
        zones: Vec<Zone>,
        n_users: usize,
        triples: impl IntoIterator<Item = (SlotId, UserId, f64)>,
    ) -> Result<Self> {
        let pos: HashMap<SlotId, usize> = slots
            .iter()
            .enumerate()
            .map(|(i, s)| (s.slot_id, i))
            .collect();
        let mut rows = vec![Vec::new(); slots.len()];
        for (sid, user, p) in triples {
            let i = *pos.get(&sid).ok_or(Error::UnknownSlotId(sid))?;
            rows[i].push((user, p));
        }
        Instance::new(slots, zones, InfluenceMatrix::new(n_users, rows))
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn zones(&self) -> &[Zone] {
        &self.zones
    }

    pub fn matrix(&self) -> &InfluenceMatrix {
        &self.matrix
    }

    pub fn n_slots(&self) -> usize {
        self.slots.len()
    }

    pub fn n_zones(&self) -> usize {
        self.zones.len()
    }

    pub fn n_users(&self) -> usize {
        self.matrix.n_users
    }

    pub fn slot(&self, index: usize) -> &Slot {
        &self.slots[index]
    }

    pub fn index_of(&self, id: SlotId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn row(&self, index: usize) -> &[(UserId, f64)] {
        self.matrix.row(index)
    }

    pub fn cost(&self, index: usize) -> u64 {
        self.slots[index].cost
    }

    /// `I({s})` for the slot at `index`.
    pub fn singleton_influence(&self, index: usize) -> f64 {
        self.singleton[index]
    }

    pub fn indices_of(&self, ids: &[SlotId]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|&id| self.index_of(id).ok_or(Error::UnknownSlotId(id)))
            .collect()
    }

    /// Slot indices grouped by zone. Slots pointing at a missing zone are left out.
    pub fn zone_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.zones.len()];
        for (i, s) in self.slots.iter().enumerate() {
            if let Some(v) = out.get_mut(s.zone_id) {
                v.push(i);
            }
        }
        out
    }

    /// Sub-instance made of the slots accepted by `keep`. Zones and users are kept.
    pub fn restrict(&self, mut keep: impl FnMut(&Slot) -> bool) -> Instance {
        let mut slots = Vec::new();
        let mut rows = Vec::new();
        for (i, s) in self.slots.iter().enumerate() {
            if keep(s) {
                slots.push(s.clone());
                rows.push(self.matrix.rows[i].clone());
            }
        }
        Instance::new(
            slots,
            self.zones.clone(),
            InfluenceMatrix::new(self.matrix.n_users, rows),
        )
        .expect("rows stay aligned with slots")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// On-disk layout of an instance.
#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    zones: Vec<Zone>,
    slots: Vec<Slot>,
    n_users: usize,
    matrix: Vec<(SlotId, UserId, f64)>,
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let matrix = self
            .slots
            .iter()
            .zip(&self.matrix.rows)
            .flat_map(|(s, row)| row.iter().map(move |&(u, p)| (s.slot_id, u, p)))
            .collect();
        InstanceDoc {
            zones: self.zones.clone(),
            slots: self.slots.clone(),
            n_users: self.matrix.n_users,
            matrix,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = InstanceDoc::deserialize(deserializer)?;
        Instance::from_triples(doc.slots, doc.zones, doc.n_users, doc.matrix)
            .map_err(serde::de::Error::custom)
    }
}

/// An advertiser's request: minimum influence per zone plus a total budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    /// One entry per zone; zero means the zone is not demanded.
    pub sigma: Vec<f64>,
    pub budget: u64,
}

impl Demand {
    pub fn new(sigma: Vec<f64>, budget: u64) -> Self {
        Demand { sigma, budget }
    }

    /// No zonal demands, only a budget.
    pub fn budget_only(n_zones: usize, budget: u64) -> Self {
        Demand::new(vec![0.0; n_zones], budget)
    }

    /// Zones with a positive demand, ascending.
    pub fn demanded_zones(&self) -> impl Iterator<Item = ZoneId> + '_ {
        self.sigma
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0.0)
            .map(|(z, _)| z)
    }

    pub fn check(&self, instance: &Instance) -> Result<()> {
        if self.sigma.len() != instance.n_zones() {
            return Err(Error::DemandShape {
                expected: instance.n_zones(),
                got: self.sigma.len(),
            });
        }
        if let Some(zone) = self.sigma.iter().position(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidDemand { zone });
        }
        Ok(())
    }
}

/// `true` while `achieved` still falls short of `required`.
pub(crate) fn unmet(achieved: f64, required: f64) -> bool {
    achieved < required - FEASIBILITY_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Selected slot ids in the order the solver picked them.
    pub selected: Vec<SlotId>,
    pub total_cost: u64,
    pub total_influence: f64,
    pub zonal_influence: Vec<f64>,
    pub feasible: bool,
}

impl Solution {
    pub fn sorted_selection(&self) -> Vec<SlotId> {
        let mut v = self.selected.clone();
        v.sort_unstable();
        v
    }
}

/// Computes cost, total and per-zone influence, and feasibility of `selected`.
/// Duplicate ids are counted once.
pub fn evaluate(instance: &Instance, demand: &Demand, selected: &[SlotId]) -> Result<Solution> {
    demand.check(instance)?;
    let mut seen = HashSet::with_capacity(selected.len());
    let mut ids = Vec::with_capacity(selected.len());
    let mut indices = Vec::with_capacity(selected.len());
    for &id in selected {
        let i = instance.index_of(id).ok_or(Error::UnknownSlotId(id))?;
        if seen.insert(id) {
            ids.push(id);
            indices.push(i);
        }
    }
    let total_cost = indices.iter().map(|&i| instance.cost(i)).sum();
    let total_influence = influence::influence_of_indices(instance, indices.iter().copied());
    let zonal_influence: Vec<f64> = (0..instance.n_zones())
        .map(|z| {
            influence::influence_of_indices(
                instance,
                indices.iter().copied().filter(|&i| instance.slot(i).zone_id == z),
            )
        })
        .collect();
    let feasible = total_cost <= demand.budget
        && zonal_influence
            .iter()
            .zip(&demand.sigma)
            .all(|(&got, &want)| !unmet(got, want));
    Ok(Solution {
        selected: ids,
        total_cost,
        total_influence,
        zonal_influence,
        feasible,
    })
}

/// One broken invariant found by [`validate_instance`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    CostNotPositive { slot_id: SlotId },
    DuplicateSlotId { slot_id: SlotId },
    DuplicateWindow { billboard_id: u32, time_index: u32 },
    UnknownZone { slot_id: SlotId, zone_id: ZoneId },
    ZoneIdMismatch { position: usize, zone_id: ZoneId },
    InvalidBBox { zone_id: ZoneId },
    ZonesOverlap { first: ZoneId, second: ZoneId },
    UserOutOfRange { slot_id: SlotId, user_id: UserId },
    ProbOutOfRange { slot_id: SlotId, user_id: UserId, prob: f64 },
    DuplicatePair { slot_id: SlotId, user_id: UserId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CostNotPositive { slot_id } => write!(f, "slot {slot_id} has cost 0"),
            Violation::DuplicateSlotId { slot_id } => write!(f, "slot id {slot_id} appears twice"),
            Violation::DuplicateWindow {
                billboard_id,
                time_index,
            } => write!(f, "billboard {billboard_id} has two slots at window {time_index}"),
            Violation::UnknownZone { slot_id, zone_id } => {
                write!(f, "slot {slot_id} refers to missing zone {zone_id}")
            }
            Violation::ZoneIdMismatch { position, zone_id } => {
                write!(f, "zone at position {position} carries id {zone_id}")
            }
            Violation::InvalidBBox { zone_id } => write!(f, "zone {zone_id} has an empty or inverted bbox"),
            Violation::ZonesOverlap { first, second } => write!(f, "zones {first} and {second} overlap"),
            Violation::UserOutOfRange { slot_id, user_id } => {
                write!(f, "slot {slot_id} references user {user_id} beyond n_users")
            }
            Violation::ProbOutOfRange {
                slot_id,
                user_id,
                prob,
            } => write!(f, "slot {slot_id}, user {user_id}: probability {prob} not in (0, 1]"),
            Violation::DuplicatePair { slot_id, user_id } => {
                write!(f, "slot {slot_id} lists user {user_id} twice")
            }
        }
    }
}

pub fn validate_instance(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();

    for (pos, zone) in instance.zones.iter().enumerate() {
        if zone.zone_id != pos {
            out.push(Violation::ZoneIdMismatch {
                position: pos,
                zone_id: zone.zone_id,
            });
        }
        let b = &zone.bbox;
        let ordered = b.lat_min <= b.lat_max && b.lon_min <= b.lon_max;
        if !ordered || [b.lat_min, b.lat_max, b.lon_min, b.lon_max].iter().any(|v| !v.is_finite()) {
            out.push(Violation::InvalidBBox {
                zone_id: zone.zone_id,
            });
        }
    }
    for (i, a) in instance.zones.iter().enumerate() {
        for b in &instance.zones[i + 1..] {
            if a.bbox.overlaps(&b.bbox) {
                out.push(Violation::ZonesOverlap {
                    first: a.zone_id,
                    second: b.zone_id,
                });
            }
        }
    }

    let mut ids = HashSet::new();
    let mut windows = HashSet::new();
    for s in &instance.slots {
        if s.cost == 0 {
            out.push(Violation::CostNotPositive { slot_id: s.slot_id });
        }
        if !ids.insert(s.slot_id) {
            out.push(Violation::DuplicateSlotId { slot_id: s.slot_id });
        }
        if !windows.insert((s.billboard_id, s.time_index)) {
            out.push(Violation::DuplicateWindow {
                billboard_id: s.billboard_id,
                time_index: s.time_index,
            });
        }
        if s.zone_id >= instance.zones.len() {
            out.push(Violation::UnknownZone {
                slot_id: s.slot_id,
                zone_id: s.zone_id,
            });
        }
    }

    let n_users = instance.n_users();
    for (s, row) in instance.slots.iter().zip(&instance.matrix.rows) {
        let mut users = HashSet::with_capacity(row.len());
        for &(user_id, prob) in row {
            if user_id as usize >= n_users {
                out.push(Violation::UserOutOfRange {
                    slot_id: s.slot_id,
                    user_id,
                });
            }
            if !(prob > 0.0 && prob <= 1.0) {
                out.push(Violation::ProbOutOfRange {
                    slot_id: s.slot_id,
                    user_id,
                    prob,
                });
            }
            if !users.insert(user_id) {
                out.push(Violation::DuplicatePair {
                    slot_id: s.slot_id,
                    user_id,
                });
            }
        }
    }
    out
}
