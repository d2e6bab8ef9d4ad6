//! Trip-record ingestion: CSV parsing, duration filtering, averaged ground
//! costs, airport demand counts, aerial times and zone pruning, assembled
//! into a [`ProblemInstance`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Zone, ZoneId};

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

/// Mean Earth radius in statute miles.
pub const EARTH_RADIUS_MILES: f64 = 3958.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripRecord {
    pub pickup_time: NaiveDateTime,
    pub dropoff_time: NaiveDateTime,
    pub origin_zone: ZoneId,
    pub dest_zone: ZoneId,
}

impl TripRecord {
    pub fn duration_minutes(&self) -> f64 {
        self.duration_seconds() as f64 / 60.0
    }

    pub fn duration_seconds(&self) -> i64 {
        (self.dropoff_time - self.pickup_time).num_seconds()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeepRule {
    All,
    Count(usize),
    /// Fraction of zones kept, highest demand first.
    Quantile(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    /// Air-taxi cruise speed, miles per hour.
    pub airspeed: f64,
    /// Loading/unloading minutes at each end of an aerial leg.
    pub load_unload: f64,
    pub min_trip_minutes: f64,
    pub max_trip_minutes: f64,
    pub keep: KeepRule,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            airspeed: 150.0,
            load_unload: 2.0,
            min_trip_minutes: 1.0,
            max_trip_minutes: 300.0,
            keep: KeepRule::All,
        }
    }
}

impl IngestConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.airspeed > 0.0 && self.airspeed.is_finite()) {
            return Err(Error::Data(format!("airspeed must be > 0, got {}", self.airspeed)));
        }
        if !(0.0 <= self.min_trip_minutes && self.min_trip_minutes < self.max_trip_minutes) {
            return Err(Error::Data(format!(
                "trip duration bounds must satisfy 0 <= min < max, got [{}, {}]",
                self.min_trip_minutes, self.max_trip_minutes
            )));
        }
        if let KeepRule::Quantile(q) = self.keep {
            if !(q > 0.0 && q <= 1.0) {
                return Err(Error::Data(format!("keep quantile must be in (0, 1], got {q}")));
            }
        }
        Ok(())
    }

    pub fn retains(&self, trip: &TripRecord) -> bool {
        let d = trip.duration_minutes();
        d >= self.min_trip_minutes && d <= self.max_trip_minutes
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseStats {
    pub rows: u64,
    pub accepted: u64,
    pub malformed: u64,
    pub negative_duration: u64,
}

struct Columns {
    pickup: usize,
    dropoff: usize,
    origin: usize,
    dest: usize,
}

const PICKUP_NAMES: &[&str] = &["pickup_datetime", "tpep_pickup_datetime", "lpep_pickup_datetime"];
const DROPOFF_NAMES: &[&str] = &["dropoff_datetime", "tpep_dropoff_datetime", "lpep_dropoff_datetime"];
const ORIGIN_NAMES: &[&str] = &["pulocationid"];
const DEST_NAMES: &[&str] = &["dolocationid"];

fn locate(headers: &csv::StringRecord) -> Result<Columns> {
    let lower: Vec<String> = headers.iter().map(|h| h.trim().to_ascii_lowercase()).collect();
    let find = |names: &[&str], canonical: &str| {
        lower
            .iter()
            .position(|h| names.contains(&h.as_str()))
            .ok_or_else(|| Error::MissingColumn(canonical.to_string()))
    };
    Ok(Columns {
        pickup: find(PICKUP_NAMES, "pickup_datetime")?,
        dropoff: find(DROPOFF_NAMES, "dropoff_datetime")?,
        origin: find(ORIGIN_NAMES, "PULocationID")?,
        dest: find(DEST_NAMES, "DOLocationID")?,
    })
}

fn csv_error(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Format(format!("{other:?}")),
        }
    } else {
        Error::Format(e.to_string())
    }
}

enum RowOutcome {
    Trip(TripRecord),
    Malformed,
    NegativeDuration,
}

fn parse_row(row: &csv::StringRecord, cols: &Columns) -> RowOutcome {
    let field = |i: usize| row.get(i).map(str::trim).filter(|s| !s.is_empty());
    let parsed = (|| {
        let pickup = NaiveDateTime::parse_from_str(field(cols.pickup)?, TIMESTAMP_FORMAT).ok()?;
        let dropoff = NaiveDateTime::parse_from_str(field(cols.dropoff)?, TIMESTAMP_FORMAT).ok()?;
        let origin = field(cols.origin)?.parse::<u32>().ok()?;
        let dest = field(cols.dest)?.parse::<u32>().ok()?;
        Some(TripRecord {
            pickup_time: pickup,
            dropoff_time: dropoff,
            origin_zone: ZoneId(origin),
            dest_zone: ZoneId(dest),
        })
    })();
    match parsed {
        None => RowOutcome::Malformed,
        Some(t) if t.dropoff_time < t.pickup_time => RowOutcome::NegativeDuration,
        Some(t) => RowOutcome::Trip(t),
    }
}

/// Parses header-addressed trip rows. Bad rows are counted, never fatal.
pub fn parse_trips<R: Read>(reader: R) -> Result<(Vec<TripRecord>, ParseStats)> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let cols = locate(rdr.headers().map_err(csv_error)?)?;
    let mut stats = ParseStats::default();
    let mut trips = Vec::new();
    let mut row = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut row) {
            Ok(false) => break,
            Ok(true) => {
                stats.rows += 1;
                match parse_row(&row, &cols) {
                    RowOutcome::Trip(t) => {
                        stats.accepted += 1;
                        trips.push(t);
                    }
                    RowOutcome::Malformed => stats.malformed += 1,
                    RowOutcome::NegativeDuration => stats.negative_duration += 1,
                }
            }
            Err(e) if e.is_io_error() => return Err(csv_error(e)),
            Err(_) => {
                stats.rows += 1;
                stats.malformed += 1;
            }
        }
    }
    Ok((trips, stats))
}

#[derive(Debug, Deserialize)]
struct ZoneRow {
    zone_id: u32,
    name: String,
    lat: Option<f64>,
    lon: Option<f64>,
    is_airport: String,
}

/// Reads `zone_id,name,lat,lon,is_airport`.
pub fn read_zones<R: Read>(reader: R) -> Result<Vec<Zone>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut zones = Vec::new();
    for row in rdr.deserialize::<ZoneRow>() {
        let row = row.map_err(csv_error)?;
        let (Some(lat), Some(lon)) = (row.lat, row.lon) else {
            return Err(Error::Data(format!("zone {} is missing coordinates", row.zone_id)));
        };
        let is_airport = match row.is_airport.to_ascii_lowercase().as_str() {
            "1" | "true" | "yes" | "y" => true,
            "0" | "false" | "no" | "n" | "" => false,
            other => return Err(Error::Format(format!("zone {}: bad is_airport value `{other}`", row.zone_id))),
        };
        zones.push(Zone::new(row.zone_id, row.name, lat, lon, is_airport)?);
    }
    Ok(zones)
}

/// Per directed zone pair: total retained seconds and trip count.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroundCosts {
    sums: BTreeMap<(ZoneId, ZoneId), (i64, u64)>,
}

impl GroundCosts {
    /// Mean retained duration in minutes, absent when no trip was retained.
    pub fn mean(&self, origin: ZoneId, dest: ZoneId) -> Option<f64> {
        self.sums
            .get(&(origin, dest))
            .map(|&(secs, n)| secs as f64 / n as f64 / 60.0)
    }

    pub fn trip_count(&self, origin: ZoneId, dest: ZoneId) -> u64 {
        self.sums.get(&(origin, dest)).map_or(0, |&(_, n)| n)
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }
}

/// Averages retained trip durations per ordered zone pair. Sums are kept in
/// integer seconds so the result does not depend on row order.
pub fn build_ground_costs(trips: &[TripRecord], config: &IngestConfig) -> GroundCosts {
    let mut sums: BTreeMap<(ZoneId, ZoneId), (i64, u64)> = BTreeMap::new();
    for t in trips.iter().filter(|t| config.retains(t)) {
        let e = sums.entry((t.origin_zone, t.dest_zone)).or_default();
        e.0 += t.duration_seconds();
        e.1 += 1;
    }
    GroundCosts { sums }
}

/// Retained trip counts per (origin, airport).
pub fn build_demand(trips: &[TripRecord], airports: &[ZoneId], config: &IngestConfig) -> BTreeMap<(ZoneId, ZoneId), u64> {
    let airports: BTreeSet<ZoneId> = airports.iter().copied().collect();
    let mut demand = BTreeMap::new();
    for t in trips.iter().filter(|t| config.retains(t) && airports.contains(&t.dest_zone)) {
        *demand.entry((t.origin_zone, t.dest_zone)).or_insert(0) += 1;
    }
    demand
}

/// Equirectangular projection about a fixed reference latitude; distances are
/// planar Euclidean in the projected plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    cos_ref: f64,
}

impl Projection {
    pub fn new(reference_lat_deg: f64) -> Self {
        Projection {
            cos_ref: reference_lat_deg.to_radians().cos(),
        }
    }

    /// Projection about the mean latitude of `zones`.
    pub fn centered_on(zones: &[Zone]) -> Self {
        let lat = if zones.is_empty() {
            0.0
        } else {
            zones.iter().map(|z| z.lat).sum::<f64>() / zones.len() as f64
        };
        Projection::new(lat)
    }

    pub fn distance_miles(&self, from: &Zone, to: &Zone) -> Result<f64> {
        for z in [from, to] {
            if !z.lat.is_finite() || !z.lon.is_finite() {
                return Err(Error::Data(format!("zone {} has no usable coordinates", z.id)));
            }
        }
        let dx = EARTH_RADIUS_MILES * self.cos_ref * (to.lon - from.lon).to_radians();
        let dy = EARTH_RADIUS_MILES * (to.lat - from.lat).to_radians();
        Ok(dx.hypot(dy))
    }
}

/// Aerial minutes between two zones at a constant airspeed (mph).
pub fn aerial_cost(from: &Zone, to: &Zone, airspeed: f64, projection: &Projection) -> Result<f64> {
    if !(airspeed > 0.0) {
        return Err(Error::Data(format!("airspeed must be > 0, got {airspeed}")));
    }
    Ok(projection.distance_miles(from, to)? / airspeed * 60.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneOutcome {
    /// Retained zones, ascending id.
    pub retained: Vec<ZoneId>,
    /// True when the request exceeded the available zones.
    pub clamped: bool,
}

/// Keeps the zones with the largest total airport demand (ties to lower id).
pub fn prune_zones(totals: &BTreeMap<ZoneId, u64>, keep: KeepRule) -> PruneOutcome {
    let available = totals.len();
    let (wanted, clamped) = match keep {
        KeepRule::All => (available, false),
        KeepRule::Count(n) => (n.min(available), n > available),
        KeepRule::Quantile(q) => {
            let n = (q.clamp(0.0, 1.0) * available as f64).ceil() as usize;
            (n.min(available), q > 1.0)
        }
    };
    let mut ranked: Vec<(ZoneId, u64)> = totals.iter().map(|(&z, &t)| (z, t)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut retained: Vec<ZoneId> = ranked.into_iter().take(wanted).map(|(z, _)| z).collect();
    retained.sort();
    PruneOutcome { retained, clamped }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestStats {
    pub parse: ParseStats,
    pub retained_trips: u64,
    pub too_short: u64,
    pub too_long: u64,
    pub unknown_zone_trips: u64,
    pub airport_trips: u64,
    pub origins_before_prune: usize,
    pub origins_after_prune: usize,
    pub prune_clamped: bool,
    pub ground_pairs: usize,
}

/// Assembles a problem instance from zones and parsed trips.
pub fn build_instance(zones: &[Zone], trips: &[TripRecord], config: &IngestConfig) -> Result<(ProblemInstance, IngestStats)> {
    config.check()?;
    let by_id: HashMap<ZoneId, &Zone> = zones.iter().map(|z| (z.id, z)).collect();
    if by_id.len() != zones.len() {
        return Err(Error::Data("duplicate zone ids in zones file".into()));
    }
    let mut airports: Vec<Zone> = zones.iter().filter(|z| z.is_airport).cloned().collect();
    airports.sort_by_key(|z| z.id);
    if airports.is_empty() {
        return Err(Error::Data("zones file flags no airports".into()));
    }
    let airport_ids: Vec<ZoneId> = airports.iter().map(|z| z.id).collect();

    let mut stats = IngestStats::default();
    for t in trips {
        let d = t.duration_minutes();
        if d < config.min_trip_minutes {
            stats.too_short += 1;
        } else if d > config.max_trip_minutes {
            stats.too_long += 1;
        } else {
            stats.retained_trips += 1;
            if !by_id.contains_key(&t.origin_zone) || !by_id.contains_key(&t.dest_zone) {
                stats.unknown_zone_trips += 1;
            }
        }
    }

    let ground = build_ground_costs(trips, config);
    let demand = build_demand(trips, &airport_ids, config);
    stats.ground_pairs = ground.len();

    let mut totals: BTreeMap<ZoneId, u64> = zones.iter().filter(|z| !z.is_airport).map(|z| (z.id, 0)).collect();
    for (&(o, _), &n) in &demand {
        if let Some(t) = totals.get_mut(&o) {
            *t += n;
            stats.airport_trips += n;
        }
    }
    stats.origins_before_prune = totals.len();
    let pruned = prune_zones(&totals, config.keep);
    stats.origins_after_prune = pruned.retained.len();
    stats.prune_clamped = pruned.clamped;

    let origins: Vec<Zone> = pruned.retained.iter().map(|id| by_id[id].clone()).collect();
    let projection = Projection::centered_on(zones);

    let columns: Vec<ZoneId> = origins.iter().map(|z| z.id).chain(airport_ids.iter().copied()).collect();
    let ground_cost = origins
        .iter()
        .map(|o| {
            columns
                .iter()
                .map(|&c| if c == o.id { Some(0.0) } else { ground.mean(o.id, c) })
                .collect()
        })
        .collect();
    let aerial_cost = origins
        .iter()
        .map(|k| {
            airports
                .iter()
                .map(|a| aerial_cost(k, a, config.airspeed, &projection).map(Some))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let demand_matrix = origins
        .iter()
        .map(|o| {
            airport_ids
                .iter()
                .map(|&a| demand.get(&(o.id, a)).copied().unwrap_or(0) as i64)
                .collect()
        })
        .collect();

    let instance = ProblemInstance::new(origins, airports, ground_cost, aerial_cost, demand_matrix)?;
    Ok((instance, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> NaiveDateTime {
        NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT).unwrap()
    }

    fn trip(minutes: i64, o: u32, d: u32) -> TripRecord {
        let start = ts("2018-01-05 08:00:00");
        TripRecord {
            pickup_time: start,
            dropoff_time: start + chrono::Duration::minutes(minutes),
            origin_zone: ZoneId(o),
            dest_zone: ZoneId(d),
        }
    }

    const HEADER: &str = "pickup_datetime,dropoff_datetime,PULocationID,DOLocationID\n";

    #[test]
    fn parses_a_row() {
        let text = format!("{HEADER}2018-01-05 08:10:00,2018-01-05 08:40:00,7,132\n");
        let (trips, stats) = parse_trips(text.as_bytes()).unwrap();
        assert_eq!(trips.len(), 1);
        assert_eq!(trips[0].duration_minutes(), 30.0);
        assert_eq!((trips[0].origin_zone, trips[0].dest_zone), (ZoneId(7), ZoneId(132)));
        assert_eq!(stats.accepted, 1);
    }

    #[test]
    fn negative_duration_rejected() {
        let text = format!("{HEADER}2018-01-05 08:40:00,2018-01-05 08:10:00,7,132\n");
        let (trips, stats) = parse_trips(text.as_bytes()).unwrap();
        assert!(trips.is_empty());
        assert_eq!(stats.negative_duration, 1);
    }

    #[test]
    fn malformed_rows_counted() {
        let text = format!(
            "{HEADER}\
             2018-01-05 08:10:00,2018-01-05 08:40:00,7,132\n\
             2018-01-05 09:10:00,2018-01-05 09:40:00,8,132\n\
             2018-01-05 10:10:00,not-a-time,8,132\n\
             2018-01-05 11:10:00,2018-01-05 11:40:00,9,1\n\
             2018-01-05 12:10:00,2018-01-05 12:40:00,9,138\n"
        );
        let (trips, stats) = parse_trips(text.as_bytes()).unwrap();
        assert_eq!(trips.len(), 4);
        assert_eq!(stats.malformed, 1);
        assert_eq!(stats.rows, 5);
    }

    #[test]
    fn short_rows_and_blank_ids_are_malformed() {
        let text = format!("{HEADER}2018-01-05 08:10:00,2018-01-05 08:40:00,7\n2018-01-05 08:10:00,2018-01-05 08:40:00,,132\n");
        let (trips, stats) = parse_trips(text.as_bytes()).unwrap();
        assert!(trips.is_empty());
        assert_eq!(stats.malformed, 2);
    }

    #[test]
    fn header_aliases_and_extra_columns() {
        let text = "Dispatching_base_num,Pickup_DateTime,DropOff_datetime,PUlocationID,DOlocationID,SR_Flag\n\
                    B1,2018-01-05 08:10:00,2018-01-05 08:40:00,7,132,\n";
        let (trips, _) = parse_trips(text.as_bytes()).unwrap();
        assert_eq!(trips.len(), 1);
    }

    #[test]
    fn missing_column_named() {
        let err = parse_trips("pickup_datetime,dropoff_datetime,PULocationID\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MissingColumn(ref c) if c == "DOLocationID"), "{err}");
    }

    #[test]
    fn ground_cost_means() {
        let cfg = IngestConfig::default();
        let g = build_ground_costs(&[trip(30, 7, 132)], &cfg);
        assert_eq!(g.mean(ZoneId(7), ZoneId(132)), Some(30.0));
        assert_eq!(g.mean(ZoneId(132), ZoneId(7)), None);

        let g = build_ground_costs(&[trip(10, 7, 132), trip(20, 7, 132)], &cfg);
        assert_eq!(g.mean(ZoneId(7), ZoneId(132)), Some(15.0));

        let g = build_ground_costs(&[trip(10, 7, 132), trip(-5, 7, 132), trip(20, 7, 132)], &cfg);
        assert_eq!(g.mean(ZoneId(7), ZoneId(132)), Some(15.0));
        assert_eq!(g.trip_count(ZoneId(7), ZoneId(132)), 2);

        let g = build_ground_costs(&[trip(10, 7, 132), trip(400, 7, 132)], &cfg);
        assert_eq!(g.mean(ZoneId(7), ZoneId(132)), Some(10.0));
    }

    #[test]
    fn demand_counts_airport_trips_only() {
        let cfg = IngestConfig::default();
        let trips = [trip(30, 7, 132), trip(31, 7, 132), trip(32, 7, 132), trip(12, 7, 8)];
        let d = build_demand(&trips, &[ZoneId(1), ZoneId(132), ZoneId(138)], &cfg);
        assert_eq!(d.get(&(ZoneId(7), ZoneId(132))), Some(&3));
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn aerial_minutes() {
        let p = Projection::new(40.7);
        let a = Zone::new(1, "a", 40.7, -73.9, false).unwrap();
        assert_eq!(aerial_cost(&a, &a, 150.0, &p).unwrap(), 0.0);
        let dlat = (5.0 / EARTH_RADIUS_MILES).to_degrees();
        let b = Zone::new(2, "b", 40.7 + dlat, -73.9, false).unwrap();
        let m = aerial_cost(&a, &b, 150.0, &p).unwrap();
        assert!((m - 2.0).abs() < 1e-9, "{m}");
        assert!(aerial_cost(&a, &b, 0.0, &p).is_err());
        let mut bad = a.clone();
        bad.lat = f64::NAN;
        assert!(aerial_cost(&a, &bad, 150.0, &p).is_err());
    }

    #[test]
    fn pruning_ranks_by_total() {
        let totals: BTreeMap<ZoneId, u64> = [(ZoneId(1), 10), (ZoneId(2), 5), (ZoneId(3), 0)].into();
        assert_eq!(prune_zones(&totals, KeepRule::Count(2)).retained, vec![ZoneId(1), ZoneId(2)]);
        assert_eq!(prune_zones(&totals, KeepRule::All).retained.len(), 3);
        let clamped = prune_zones(&totals, KeepRule::Count(9));
        assert!(clamped.clamped);
        assert_eq!(clamped.retained.len(), 3);
        assert_eq!(prune_zones(&totals, KeepRule::Quantile(0.5)).retained, vec![ZoneId(1), ZoneId(2)]);

        let tied: BTreeMap<ZoneId, u64> = [(ZoneId(4), 5), (ZoneId(2), 5), (ZoneId(3), 5)].into();
        assert_eq!(prune_zones(&tied, KeepRule::Count(2)).retained, vec![ZoneId(2), ZoneId(3)]);
    }

    #[test]
    fn zones_file() {
        let text = "zone_id,name,lat,lon,is_airport\n7,Astoria,40.76,-73.92,0\n132,JFK Airport,40.64,-73.78,1\n";
        let zones = read_zones(text.as_bytes()).unwrap();
        assert_eq!(zones.len(), 2);
        assert!(zones[1].is_airport);
        let missing = "zone_id,name,lat,lon,is_airport\n7,Astoria,,-73.92,0\n";
        assert!(read_zones(missing.as_bytes()).unwrap_err().to_string().contains("missing coordinates"));
    }

    #[test]
    fn assembles_instance() {
        let zones = vec![
            Zone::new(7, "a", 40.76, -73.92, false).unwrap(),
            Zone::new(8, "b", 40.75, -73.99, false).unwrap(),
            Zone::new(132, "JFK", 40.64, -73.78, true).unwrap(),
        ];
        let trips = vec![trip(30, 7, 132), trip(40, 7, 132), trip(10, 7, 8), trip(45, 8, 132)];
        let (inst, stats) = build_instance(&zones, &trips, &IngestConfig::default()).unwrap();
        assert!(inst.validate().is_empty(), "{:?}", inst.validate());
        assert_eq!(inst.num_origins(), 2);
        assert_eq!(inst.num_airports(), 1);
        assert_eq!(inst.demand, vec![vec![2], vec![1]]);
        assert_eq!(inst.ground_to_airport(0, 0), Some(35.0));
        assert_eq!(inst.ground_to_candidate(0, 1), Some(10.0));
        assert_eq!(inst.ground_to_candidate(1, 0), None);
        assert_eq!(inst.ground_to_candidate(1, 1), Some(0.0));
        assert_eq!(stats.airport_trips, 3);

        let cfg = IngestConfig {
            keep: KeepRule::Count(1),
            ..IngestConfig::default()
        };
        let (inst, _) = build_instance(&zones, &trips, &cfg).unwrap();
        assert_eq!(inst.origins[0].id, ZoneId(7));
    }
}
