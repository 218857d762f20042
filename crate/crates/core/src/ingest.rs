//! Raw billboard and check-in files to an [`Instance`].
//!
//! Pipeline: load CSVs, expand each billboard into one slot per time window,
//! place billboards on a lat/lon zone grid, count each user's check-ins near a
//! billboard during a window, and price slots from their influence.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BBox, InfluenceMatrix, Instance, Slot, UserId, Zone};

pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

#[derive(Debug, Clone, PartialEq)]
pub struct BillboardRecord {
    pub billboard_id: u32,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckinRecord {
    pub user_id: u64,
    pub lat: f64,
    pub lon: f64,
    /// Seconds since the epoch.
    pub timestamp: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded<T> {
    pub records: Vec<T>,
    pub rejected: Vec<RejectedRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneGrid {
    pub rows: usize,
    pub cols: usize,
    /// Fixed grid extent; defaults to the billboards' bounding box.
    #[serde(default)]
    pub bbox: Option<BBox>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub t1: i64,
    pub t2: i64,
    /// Slot length in seconds.
    pub delta: i64,
    /// Distance threshold in meters.
    #[serde(default = "default_eta")]
    pub eta: f64,
    /// Influence probability contributed by a single nearby check-in.
    #[serde(default = "default_p_hit")]
    pub p_hit: f64,
    pub zone_grid: ZoneGrid,
    #[serde(default = "default_cost_delta_range")]
    pub cost_delta_range: (f64, f64),
    #[serde(default)]
    pub seed: u64,
}

fn default_eta() -> f64 {
    100.0
}

fn default_p_hit() -> f64 {
    0.1
}

pub(crate) fn default_cost_delta_range() -> (f64, f64) {
    (0.8, 1.1)
}

impl IngestConfig {
    pub fn new(t1: i64, t2: i64, delta: i64) -> Self {
        IngestConfig {
            t1,
            t2,
            delta,
            eta: default_eta(),
            p_hit: default_p_hit(),
            zone_grid: ZoneGrid {
                rows: 1,
                cols: 1,
                bbox: None,
            },
            cost_delta_range: default_cost_delta_range(),
            seed: 0,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.t1 >= self.t2 {
            return bad(format!("t1 ({}) must precede t2 ({})", self.t1, self.t2));
        }
        if self.delta <= 0 || (self.t2 - self.t1) % self.delta != 0 {
            return bad(format!("delta {} must divide t2 - t1 = {}", self.delta, self.t2 - self.t1));
        }
        if !(self.eta > 0.0) {
            return bad(format!("eta must be positive, got {}", self.eta));
        }
        if !(self.p_hit > 0.0 && self.p_hit <= 1.0) {
            return bad(format!("p_hit must lie in (0, 1], got {}", self.p_hit));
        }
        if self.zone_grid.rows == 0 || self.zone_grid.cols == 0 {
            return bad("zone grid needs at least one row and one column".into());
        }
        check_delta_range(self.cost_delta_range)
    }

    pub fn windows(&self) -> u32 {
        ((self.t2 - self.t1) / self.delta) as u32
    }
}

pub(crate) fn check_delta_range((lo, hi): (f64, f64)) -> Result<()> {
    if lo > 0.0 && lo <= hi && hi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("cost delta range ({lo}, {hi}) is not a positive interval")))
    }
}

pub fn haversine_m(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * a.sqrt().min(1.0).asin()
}

fn open_csv(path: &Path, expected: &[&str]) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers()?.clone();
    let found: Vec<&str> = headers.iter().collect();
    if found.len() < expected.len() || found[..expected.len()] != *expected {
        return Err(Error::HeaderMismatch {
            path: path.to_path_buf(),
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    Ok(reader)
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, name: &str) -> std::result::Result<T, String> {
    let raw = rec.get(i).ok_or_else(|| format!("missing {name}"))?;
    raw.parse().map_err(|_| format!("bad {name} `{raw}`"))
}

fn check_coords(lat: f64, lon: f64) -> std::result::Result<(), String> {
    if !(-90.0..=90.0).contains(&lat) {
        return Err(format!("latitude {lat} out of range"));
    }
    if !(-180.0..=180.0).contains(&lon) {
        return Err(format!("longitude {lon} out of range"));
    }
    Ok(())
}

/// Reads `billboard_id,lat,lon[,...]`. Extra columns are ignored.
pub fn load_billboards(path: impl AsRef<Path>) -> Result<Loaded<BillboardRecord>> {
    let path = path.as_ref();
    let mut reader = open_csv(path, &["billboard_id", "lat", "lon"])?;
    let mut out = Loaded {
        records: Vec::new(),
        rejected: Vec::new(),
    };
    for row in reader.records() {
        let rec = row?;
        let line = rec.position().map_or(0, |p| p.line());
        let parsed = (|| {
            let b = BillboardRecord {
                billboard_id: field(&rec, 0, "billboard_id")?,
                lat: field(&rec, 1, "lat")?,
                lon: field(&rec, 2, "lon")?,
            };
            check_coords(b.lat, b.lon)?;
            Ok::<_, String>(b)
        })();
        match parsed {
            Ok(b) => out.records.push(b),
            Err(reason) => out.rejected.push(RejectedRow { line, reason }),
        }
    }
    Ok(out)
}

/// Reads `user_id,lat,lon,timestamp`. Check-ins outside `[t1, t2]` are
/// dropped and reported.
pub fn load_checkins(path: impl AsRef<Path>, config: &IngestConfig) -> Result<Loaded<CheckinRecord>> {
    let path = path.as_ref();
    let mut reader = open_csv(path, &["user_id", "lat", "lon", "timestamp"])?;
    let mut out = Loaded {
        records: Vec::new(),
        rejected: Vec::new(),
    };
    for row in reader.records() {
        let rec = row?;
        let line = rec.position().map_or(0, |p| p.line());
        let parsed = (|| {
            let c = CheckinRecord {
                user_id: field(&rec, 0, "user_id")?,
                lat: field(&rec, 1, "lat")?,
                lon: field(&rec, 2, "lon")?,
                timestamp: field(&rec, 3, "timestamp")?,
            };
            check_coords(c.lat, c.lon)?;
            if c.timestamp < config.t1 || c.timestamp > config.t2 {
                return Err(format!("timestamp {} outside [{}, {}]", c.timestamp, config.t1, config.t2));
            }
            Ok::<_, String>(c)
        })();
        match parsed {
            Ok(c) => out.records.push(c),
            Err(reason) => out.rejected.push(RejectedRow { line, reason }),
        }
    }
    Ok(out)
}

pub fn write_rejected(path: impl AsRef<Path>, rows: &[RejectedRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(["line", "reason"])?;
    }
    w.flush()?;
    Ok(())
}

/// One slot per (billboard, window), ordered by billboard id then window.
/// Costs are left at 0 and zones at 0 until [`assign_costs`] and
/// [`assign_zones`] fill them in.
pub fn expand_slots(billboards: &[BillboardRecord], config: &IngestConfig) -> Vec<Slot> {
    let windows = config.windows();
    let mut ids: Vec<u32> = billboards.iter().map(|b| b.billboard_id).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.iter()
        .enumerate()
        .flat_map(|(pos, &billboard_id)| {
            (0..windows).map(move |k| Slot {
                slot_id: pos as u32 * windows + k,
                billboard_id,
                time_index: k,
                cost: 0,
                zone_id: 0,
            })
        })
        .collect()
}

/// Index of the cell along one axis. Cells are closed-open, so a point on an
/// interior edge lands in the higher cell; the upper border belongs to the
/// last cell.
fn cell(v: f64, lo: f64, hi: f64, n: usize) -> usize {
    let step = (hi - lo) / n as f64;
    (1..n).take_while(|&k| v >= lo + k as f64 * step).count()
}

/// Puts each slot in the grid cell holding its billboard. Zones are numbered
/// row-major with rows splitting latitude and columns longitude.
pub fn assign_zones(
    slots: &[Slot],
    billboards: &[BillboardRecord],
    grid: &ZoneGrid,
) -> Result<(Vec<Slot>, Vec<Zone>)> {
    const SLACK: f64 = 1e-9;
    if grid.rows == 0 || grid.cols == 0 {
        return Err(Error::InvalidConfig("zone grid needs at least one row and one column".into()));
    }
    let bbox = match grid.bbox {
        Some(b) => b,
        None => {
            let fold = |f: fn(f64, f64) -> f64, init: f64, g: fn(&BillboardRecord) -> f64| {
                billboards.iter().map(g).fold(init, f)
            };
            if billboards.is_empty() {
                BBox::new(0.0, 0.0, 0.0, 0.0)
            } else {
                BBox::new(
                    fold(f64::min, f64::INFINITY, |b| b.lat),
                    fold(f64::max, f64::NEG_INFINITY, |b| b.lat),
                    fold(f64::min, f64::INFINITY, |b| b.lon),
                    fold(f64::max, f64::NEG_INFINITY, |b| b.lon),
                )
            }
        }
    };

    let mut zone_of = HashMap::with_capacity(billboards.len());
    for b in billboards {
        let inside = b.lat >= bbox.lat_min - SLACK
            && b.lat <= bbox.lat_max + SLACK
            && b.lon >= bbox.lon_min - SLACK
            && b.lon <= bbox.lon_max + SLACK;
        if !inside {
            return Err(Error::OutOfGrid {
                billboard_id: b.billboard_id,
                lat: b.lat,
                lon: b.lon,
            });
        }
        let row = cell(b.lat, bbox.lat_min, bbox.lat_max, grid.rows);
        let col = cell(b.lon, bbox.lon_min, bbox.lon_max, grid.cols);
        zone_of.insert(b.billboard_id, row * grid.cols + col);
    }

    let lat_step = (bbox.lat_max - bbox.lat_min) / grid.rows as f64;
    let lon_step = (bbox.lon_max - bbox.lon_min) / grid.cols as f64;
    let edge = |lo: f64, hi: f64, step: f64, k: usize, n: usize| if k == n { hi } else { lo + k as f64 * step };
    let zones = (0..grid.rows * grid.cols)
        .map(|z| {
            let (r, c) = (z / grid.cols, z % grid.cols);
            Zone {
                zone_id: z,
                bbox: BBox::new(
                    edge(bbox.lat_min, bbox.lat_max, lat_step, r, grid.rows),
                    edge(bbox.lat_min, bbox.lat_max, lat_step, r + 1, grid.rows),
                    edge(bbox.lon_min, bbox.lon_max, lon_step, c, grid.cols),
                    edge(bbox.lon_min, bbox.lon_max, lon_step, c + 1, grid.cols),
                ),
            }
        })
        .collect();

    let slots = slots
        .iter()
        .map(|s| {
            let zone_id = *zone_of
                .get(&s.billboard_id)
                .ok_or_else(|| Error::InvalidConfig(format!("slot {} has no billboard record", s.slot_id)))?;
            Ok(Slot { zone_id, ..s.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((slots, zones))
}

/// `Pr(slot, user) = 1 − (1 − p_hit)^h`, `h` being the user's check-ins
/// within `eta` meters of the billboard during the slot's window. Users are
/// renumbered densely in ascending id order; pairs with `h = 0` are omitted.
pub fn build_influence_matrix(
    slots: &[Slot],
    billboards: &[BillboardRecord],
    checkins: &[CheckinRecord],
    config: &IngestConfig,
) -> InfluenceMatrix {
    let users: BTreeSet<u64> = checkins.iter().map(|c| c.user_id).collect();
    let dense: HashMap<u64, UserId> = users.iter().enumerate().map(|(i, &u)| (u, i as UserId)).collect();
    let location: HashMap<u32, (f64, f64)> = billboards.iter().map(|b| (b.billboard_id, (b.lat, b.lon))).collect();

    let mut by_window: Vec<Vec<&CheckinRecord>> = vec![Vec::new(); config.windows() as usize];
    for c in checkins {
        if c.timestamp >= config.t1 && c.timestamp < config.t2 {
            by_window[((c.timestamp - config.t1) / config.delta) as usize].push(c);
        }
    }

    let miss = 1.0 - config.p_hit;
    let rows = slots
        .iter()
        .map(|s| {
            let Some(&(lat, lon)) = location.get(&s.billboard_id) else {
                return Vec::new();
            };
            let mut hits: BTreeMap<UserId, i32> = BTreeMap::new();
            for c in by_window.get(s.time_index as usize).into_iter().flatten() {
                if haversine_m(lat, lon, c.lat, c.lon) <= config.eta {
                    *hits.entry(dense[&c.user_id]).or_default() += 1;
                }
            }
            hits.into_iter().map(|(u, h)| (u, 1.0 - miss.powi(h))).collect()
        })
        .collect();
    InfluenceMatrix::new(users.len(), rows)
}

/// `max(1, ⌊δ · I / 10⌋)`.
pub fn slot_cost(delta: f64, influence: f64) -> u64 {
    ((delta * influence / 10.0).floor() as u64).max(1)
}

/// Prices each slot from its own influence, drawing one `δ` per slot
/// uniformly from `range` in slot order.
pub fn assign_costs(slots: &[Slot], matrix: &InfluenceMatrix, range: (f64, f64), seed: u64) -> Vec<Slot> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    slots
        .iter()
        .zip(matrix.rows())
        .map(|(s, row)| {
            let influence: f64 = row.iter().map(|&(_, p)| p).sum();
            let delta = rng.random_range(range.0..=range.1);
            Slot {
                cost: slot_cost(delta, influence),
                ..s.clone()
            }
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub billboards_rejected: Vec<RejectedRow>,
    pub checkins_rejected: Vec<RejectedRow>,
}

/// Full pipeline from two CSV files.
pub fn ingest_files(
    billboards_csv: impl AsRef<Path>,
    checkins_csv: impl AsRef<Path>,
    config: &IngestConfig,
) -> Result<(Instance, IngestReport)> {
    config.check()?;
    let billboards = load_billboards(billboards_csv)?;
    let checkins = load_checkins(checkins_csv, config)?;
    let instance = build_instance(&billboards.records, &checkins.records, config)?;
    Ok((
        instance,
        IngestReport {
            billboards_rejected: billboards.rejected,
            checkins_rejected: checkins.rejected,
        },
    ))
}

pub fn build_instance(
    billboards: &[BillboardRecord],
    checkins: &[CheckinRecord],
    config: &IngestConfig,
) -> Result<Instance> {
    config.check()?;
    let slots = expand_slots(billboards, config);
    let (slots, zones) = assign_zones(&slots, billboards, &config.zone_grid)?;
    let matrix = build_influence_matrix(&slots, billboards, checkins, config);
    let slots = assign_costs(&slots, &matrix, config.cost_delta_range, config.seed);
    Instance::new(slots, zones, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    fn bb(id: u32, lat: f64, lon: f64) -> BillboardRecord {
        BillboardRecord {
            billboard_id: id,
            lat,
            lon,
        }
    }

    #[test]
    fn billboards_parse_and_reject() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "b.csv",
            "billboard_id,lat,lon,panel\n1,40.7,-74.0,a\n2,40.8,-73.9,b\n3,40.6,-74.1,c\n",
        );
        assert_eq!(load_billboards(&p).unwrap().records.len(), 3);

        let p = write(&dir, "bad.csv", "billboard_id,lat,lon\n1,95,-74.0\n2,40.8,-73.9\n");
        let got = load_billboards(&p).unwrap();
        assert_eq!(got.records.len(), 1);
        assert_eq!(got.rejected.len(), 1);
        assert_eq!(got.rejected[0].line, 2);

        let p = write(&dir, "empty.csv", "billboard_id,lat,lon\n");
        assert!(load_billboards(&p).unwrap().records.is_empty());
    }

    #[test]
    fn missing_file_and_wrong_header() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_billboards(dir.path().join("nope.csv")),
            Err(Error::FileNotFound(_))
        ));
        let p = write(&dir, "h.csv", "id,lat,lon\n1,0,0\n");
        assert!(matches!(load_billboards(&p), Err(Error::HeaderMismatch { .. })));
    }

    #[test]
    fn checkins_filter_by_horizon_and_keep_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let config = IngestConfig::new(0, 100, 25);
        let p = write(
            &dir,
            "c.csv",
            "user_id,lat,lon,timestamp\n1,0,0,10\n1,0,0,10\n2,0,0,50\n3,0,0,99\n4,0,0,100\n",
        );
        let got = load_checkins(&p, &config).unwrap();
        assert_eq!(got.records.len(), 5);
        assert_eq!(got.records[0], got.records[1]);

        let p = write(&dir, "late.csv", "user_id,lat,lon,timestamp\n1,0,0,10\n1,0,0,500\n");
        let got = load_checkins(&p, &config).unwrap();
        assert_eq!(got.records.len(), 1);
        assert_eq!(got.rejected.len(), 1);
    }

    #[test]
    fn slot_count_is_billboards_times_windows() {
        let config = IngestConfig::new(0, 400, 100);
        let slots = expand_slots(&[bb(7, 0.0, 0.0), bb(3, 0.0, 0.0)], &config);
        assert_eq!(slots.len(), 8);
        assert_eq!((slots[0].billboard_id, slots[0].time_index), (3, 0));
        assert_eq!((slots[7].billboard_id, slots[7].time_index), (7, 3));
        let one = expand_slots(&[bb(1, 0.0, 0.0)], &IngestConfig::new(0, 60, 60));
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn grid_cells() {
        let unit = ZoneGrid {
            rows: 2,
            cols: 2,
            bbox: Some(BBox::new(0.0, 1.0, 0.0, 1.0)),
        };
        let bbs = [bb(0, 0.75, 0.25), bb(1, 0.5, 0.5), bb(2, 0.0, 0.0), bb(3, 1.0, 1.0)];
        let config = IngestConfig::new(0, 1, 1);
        let slots = expand_slots(&bbs, &config);
        let (slots, zones) = assign_zones(&slots, &bbs, &unit).unwrap();
        let z: Vec<usize> = slots.iter().map(|s| s.zone_id).collect();
        assert_eq!(z, vec![2, 3, 0, 3]);
        assert_eq!(zones.len(), 4);
        assert_eq!(zones[2].bbox, BBox::new(0.5, 1.0, 0.0, 0.5));

        let single = ZoneGrid {
            rows: 1,
            cols: 1,
            bbox: None,
        };
        let (slots, _) = assign_zones(&slots, &bbs, &single).unwrap();
        assert!(slots.iter().all(|s| s.zone_id == 0));

        let outside = [bb(9, 2.0, 0.5)];
        assert!(matches!(
            assign_zones(&[], &outside, &unit),
            Err(Error::OutOfGrid { billboard_id: 9, .. })
        ));
    }

    #[test]
    fn haversine_reference_distance() {
        // one degree of latitude on the mean sphere
        let d = haversine_m(0.0, 0.0, 1.0, 0.0);
        assert!((d - EARTH_RADIUS_M * std::f64::consts::PI / 180.0).abs() < 1e-6);
        assert_eq!(haversine_m(40.0, -74.0, 40.0, -74.0), 0.0);
    }

    /// Point `meters` north of (lat, lon).
    fn north(lat: f64, meters: f64) -> f64 {
        lat + (meters / EARTH_RADIUS_M).to_degrees()
    }

    fn checkin(user: u64, lat: f64, t: i64) -> CheckinRecord {
        CheckinRecord {
            user_id: user,
            lat,
            lon: 10.0,
            timestamp: t,
        }
    }

    #[test]
    fn probabilities_from_hits() {
        let config = IngestConfig::new(0, 200, 100);
        let bbs = [bb(1, 45.0, 10.0)];
        let slots = expand_slots(&bbs, &config);

        let near = [checkin(5, north(45.0, 50.0), 10)];
        let m = build_influence_matrix(&slots, &bbs, &near, &config);
        assert_eq!(m.row(0).len(), 1);
        assert!((m.row(0)[0].1 - 0.1).abs() < 1e-12);
        assert!(m.row(1).is_empty());

        let far = [checkin(5, north(45.0, 150.0), 10)];
        let m = build_influence_matrix(&slots, &bbs, &far, &config);
        assert!(m.row(0).is_empty());

        let twice = [checkin(5, north(45.0, 50.0), 10), checkin(5, north(45.0, 20.0), 99)];
        let m = build_influence_matrix(&slots, &bbs, &twice, &config);
        assert!((m.row(0)[0].1 - 0.19).abs() < 1e-12);

        // window boundary: t = 100 belongs to the second slot
        let edge = [checkin(5, 45.0, 100)];
        let m = build_influence_matrix(&slots, &bbs, &edge, &config);
        assert!(m.row(0).is_empty());
        assert_eq!(m.row(1).len(), 1);
    }

    #[test]
    fn cost_formula() {
        assert_eq!(slot_cost(0.8, 100.0), 8);
        assert_eq!(slot_cost(1.1, 9.0), 1);
        assert_eq!(slot_cost(1.1, 0.0), 1);
    }

    #[test]
    fn costs_are_seeded() {
        let slots: Vec<Slot> = (0..20)
            .map(|i| Slot {
                slot_id: i,
                billboard_id: i,
                time_index: 0,
                cost: 0,
                zone_id: 0,
            })
            .collect();
        let rows = (0..20).map(|i| (0..i).map(|u| (u, 0.9)).collect()).collect();
        let m = InfluenceMatrix::new(20, rows);
        let a = assign_costs(&slots, &m, (0.8, 1.1), 11);
        let b = assign_costs(&slots, &m, (0.8, 1.1), 11);
        assert_eq!(a, b);
        assert!(a.iter().all(|s| s.cost >= 1));
        for (s, row) in a.iter().zip(m.rows()) {
            let infl: f64 = row.iter().map(|p| p.1).sum();
            assert!(s.cost >= slot_cost(0.8, infl) && s.cost <= slot_cost(1.1, infl));
        }
    }

    #[test]
    fn config_checks() {
        assert!(IngestConfig::new(0, 100, 30).check().is_err());
        assert!(IngestConfig::new(100, 100, 10).check().is_err());
        let mut c = IngestConfig::new(0, 100, 10);
        assert!(c.check().is_ok());
        c.eta = 0.0;
        assert!(c.check().is_err());
    }
}
