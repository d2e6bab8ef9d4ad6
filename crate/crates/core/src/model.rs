//! Domain types shared by every stage of the pipeline.
//!
//! A [`ProblemInstance`] holds the candidate origin zones, the destination
//! airports and the three cost/demand matrices. Ground costs are indexed by
//! origin row and by a column that addresses origins first and airports after
//! them, so `ground_cost[i][k]` is origin-to-candidate and
//! `ground_cost[i][n + j]` is origin-to-airport. Absent entries are `None`
//! (serialized as `null`), never zero.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Taxi-zone identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZoneId(pub u32);

impl fmt::Display for ZoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for ZoneId {
    fn from(v: u32) -> Self {
        ZoneId(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub id: ZoneId,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
    pub is_airport: bool,
}

impl Zone {
    pub fn new(id: impl Into<ZoneId>, name: impl Into<String>, lat: f64, lon: f64, is_airport: bool) -> Result<Self> {
        let zone = Zone {
            id: id.into(),
            name: name.into(),
            lat,
            lon,
            is_airport,
        };
        if !zone.has_valid_coordinates() {
            return Err(Error::Data(format!(
                "zone {} has coordinates out of range ({}, {})",
                zone.id, lat, lon
            )));
        }
        Ok(zone)
    }

    pub fn has_valid_coordinates(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..=180.0).contains(&self.lon)
    }
}

/// Sparse-aware dense matrix row type. `None` marks an absent cost.
pub type CostRow = Vec<Option<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub origins: Vec<Zone>,
    pub airports: Vec<Zone>,
    /// `origins.len()` rows by `origins.len() + airports.len()` columns, minutes.
    pub ground_cost: Vec<CostRow>,
    /// `origins.len()` rows (candidate hubs) by `airports.len()` columns, minutes.
    pub aerial_cost: Vec<CostRow>,
    /// `origins.len()` rows by `airports.len()` columns, trips.
    pub demand: Vec<Vec<i64>>,
}

impl ProblemInstance {
    /// Builds an instance after checking matrix shapes. Value-level invariants
    /// are reported by [`validate`].
    pub fn new(
        origins: Vec<Zone>,
        airports: Vec<Zone>,
        ground_cost: Vec<CostRow>,
        aerial_cost: Vec<CostRow>,
        demand: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let instance = ProblemInstance {
            origins,
            airports,
            ground_cost,
            aerial_cost,
            demand,
        };
        instance.check_shape()?;
        Ok(instance)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let instance: ProblemInstance = serde_json::from_str(text)?;
        instance.check_shape()?;
        Ok(instance)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.origins.len();
        let m = self.airports.len();
        let bad = |what: &str| Err(Error::Format(format!("{what} has the wrong shape")));
        if self.ground_cost.len() != n || self.ground_cost.iter().any(|r| r.len() != n + m) {
            return bad("ground_cost");
        }
        if self.aerial_cost.len() != n || self.aerial_cost.iter().any(|r| r.len() != m) {
            return bad("aerial_cost");
        }
        if self.demand.len() != n || self.demand.iter().any(|r| r.len() != m) {
            return bad("demand");
        }
        Ok(())
    }

    pub fn num_origins(&self) -> usize {
        self.origins.len()
    }

    pub fn num_airports(&self) -> usize {
        self.airports.len()
    }

    /// c_ik: ground minutes from origin `i` to candidate `k`.
    #[inline]
    pub fn ground_to_candidate(&self, i: usize, k: usize) -> Option<f64> {
        self.ground_cost[i][k]
    }

    /// c_ij: ground minutes from origin `i` to airport `j`.
    #[inline]
    pub fn ground_to_airport(&self, i: usize, j: usize) -> Option<f64> {
        self.ground_cost[i][self.origins.len() + j]
    }

    /// c_kj: aerial minutes from candidate `k` to airport `j`.
    #[inline]
    pub fn aerial(&self, k: usize, j: usize) -> Option<f64> {
        self.aerial_cost[k][j]
    }

    pub fn origin_index(&self, id: ZoneId) -> Option<usize> {
        self.origins.iter().position(|z| z.id == id)
    }

    pub fn airport_index(&self, id: ZoneId) -> Option<usize> {
        self.airports.iter().position(|z| z.id == id)
    }

    pub fn total_demand(&self) -> i64 {
        self.demand.iter().flatten().sum()
    }

    /// `(i, j)` index pairs with positive demand, origin-major.
    pub fn demand_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.demand
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, &d)| d > 0).map(move |(j, _)| (i, j)))
    }

    /// Number of binary variables in the full integer program:
    /// `N²|J| + N + N|J|`.
    pub fn binary_variable_count(&self) -> usize {
        let n = self.num_origins();
        let m = self.num_airports();
        n * n * m + n + n * m
    }

    /// Reports every invariant violation; empty iff the instance is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoAirports,
    DuplicateZoneId(ZoneId),
    CoordinatesOutOfRange(ZoneId),
    OriginIsAirport(ZoneId),
    AirportNotFlagged(ZoneId),
    NegativeDemand { origin: ZoneId, airport: ZoneId, value: i64 },
    InvalidCost { matrix: &'static str, row: ZoneId, col: ZoneId, value: f64 },
    NonzeroDiagonal { zone: ZoneId, value: Option<f64> },
    UnroutableDemandPair { origin: ZoneId, airport: ZoneId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAirports => write!(f, "no airports"),
            Violation::DuplicateZoneId(id) => write!(f, "duplicate zone id {id}"),
            Violation::CoordinatesOutOfRange(id) => write!(f, "coordinates out of range for zone {id}"),
            Violation::OriginIsAirport(id) => write!(f, "origin zone {id} is flagged as an airport"),
            Violation::AirportNotFlagged(id) => write!(f, "airport zone {id} is not flagged as an airport"),
            Violation::NegativeDemand { origin, airport, value } => {
                write!(f, "negative demand {value} from {origin} to {airport}")
            }
            Violation::InvalidCost { matrix, row, col, value } => {
                write!(f, "invalid {matrix} entry {value} at ({row}, {col})")
            }
            Violation::NonzeroDiagonal { zone, value } => {
                write!(f, "ground_cost diagonal for zone {zone} is {value:?}, expected 0")
            }
            Violation::UnroutableDemandPair { origin, airport } => {
                write!(f, "unroutable demand pair ({origin}, {airport}): ground cost absent")
            }
        }
    }
}

pub fn validate(instance: &ProblemInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    if instance.airports.is_empty() {
        out.push(Violation::NoAirports);
    }
    let mut seen = HashSet::new();
    for z in instance.origins.iter().chain(&instance.airports) {
        if !seen.insert(z.id) {
            out.push(Violation::DuplicateZoneId(z.id));
        }
        if !z.has_valid_coordinates() {
            out.push(Violation::CoordinatesOutOfRange(z.id));
        }
    }
    for z in &instance.origins {
        if z.is_airport {
            out.push(Violation::OriginIsAirport(z.id));
        }
    }
    for z in &instance.airports {
        if !z.is_airport {
            out.push(Violation::AirportNotFlagged(z.id));
        }
    }

    let n = instance.num_origins();
    let column_zone = |c: usize| {
        if c < n {
            instance.origins[c].id
        } else {
            instance.airports[c - n].id
        }
    };
    for (i, row) in instance.ground_cost.iter().enumerate() {
        let rid = instance.origins[i].id;
        for (c, v) in row.iter().enumerate() {
            if let Some(v) = *v {
                if !v.is_finite() || v < 0.0 {
                    out.push(Violation::InvalidCost {
                        matrix: "ground_cost",
                        row: rid,
                        col: column_zone(c),
                        value: v,
                    });
                }
            }
        }
        if row[i] != Some(0.0) {
            out.push(Violation::NonzeroDiagonal { zone: rid, value: row[i] });
        }
    }
    for (k, row) in instance.aerial_cost.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if let Some(v) = *v {
                if !v.is_finite() || v < 0.0 {
                    out.push(Violation::InvalidCost {
                        matrix: "aerial_cost",
                        row: instance.origins[k].id,
                        col: instance.airports[j].id,
                        value: v,
                    });
                }
            }
        }
    }
    for (i, row) in instance.demand.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            let (origin, airport) = (instance.origins[i].id, instance.airports[j].id);
            if d < 0 {
                out.push(Violation::NegativeDemand { origin, airport, value: d });
            } else if d > 0 && instance.ground_to_airport(i, j).is_none() {
                out.push(Violation::UnroutableDemandPair { origin, airport });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AllocationMode {
    /// Every (origin, airport) pair picks its own best hub or goes direct.
    #[default]
    PerPair,
    /// Each origin uses at most one hub for all of its airports.
    SinglePerOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TieBreak {
    #[default]
    DirectThenLowestId,
    HubThenLowestId,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Transfer time in minutes.
    pub alpha: f64,
    /// Ground congestion multiplier.
    pub beta: f64,
    pub p: usize,
    #[serde(default)]
    pub allocation_mode: AllocationMode,
    #[serde(default)]
    pub tie_break: TieBreak,
}

impl Scenario {
    pub fn new(alpha: f64, beta: f64, p: usize) -> Result<Self> {
        let s = Scenario {
            alpha,
            beta,
            p,
            allocation_mode: AllocationMode::default(),
            tie_break: TieBreak::default(),
        };
        s.check()?;
        Ok(s)
    }

    /// The uncongested, zero-transfer base case.
    pub fn base(p: usize) -> Self {
        Scenario {
            alpha: 0.0,
            beta: 1.0,
            p,
            allocation_mode: AllocationMode::default(),
            tie_break: TieBreak::default(),
        }
    }

    pub fn with_mode(mut self, mode: AllocationMode) -> Self {
        self.allocation_mode = mode;
        self
    }

    pub fn with_p(mut self, p: usize) -> Self {
        self.p = p;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::Scenario(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if !(self.beta.is_finite() && self.beta >= 1.0) {
            return Err(Error::Scenario(format!("beta must be finite and >= 1, got {}", self.beta)));
        }
        Ok(())
    }

    pub fn check_against(&self, instance: &ProblemInstance) -> Result<()> {
        self.check()?;
        if self.p > instance.num_origins() {
            return Err(Error::Scenario(format!(
                "p = {} exceeds the {} candidate zones",
                self.p,
                instance.num_origins()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RouteKind {
    Direct,
    ViaHub,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub kind: RouteKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hub: Option<ZoneId>,
    /// Per-unit-demand travel minutes.
    pub cost: f64,
}

impl Route {
    pub fn direct(cost: f64) -> Self {
        Route {
            kind: RouteKind::Direct,
            hub: None,
            cost,
        }
    }

    pub fn via(hub: ZoneId, cost: f64) -> Self {
        Route {
            kind: RouteKind::ViaHub,
            hub: Some(hub),
            cost,
        }
    }

    pub fn is_direct(&self) -> bool {
        self.kind == RouteKind::Direct
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutedPair {
    pub origin: ZoneId,
    pub airport: ZoneId,
    pub demand: i64,
    pub route: Route,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverMeta {
    pub solver: String,
    pub iterations: u64,
    pub wall_time_s: f64,
    /// Whether optimality was proved (false for heuristics and time-outs).
    pub proven_optimal: bool,
    /// Relative gap between incumbent and best bound at termination.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HubSolution {
    /// Sorted ascending.
    pub hubs: Vec<ZoneId>,
    pub routing: Vec<RoutedPair>,
    /// Vehicle-minutes.
    pub objective: f64,
    pub direct_count: usize,
    pub meta: SolverMeta,
    pub scenario: Scenario,
}

impl HubSolution {
    pub fn objective_millions(&self) -> f64 {
        self.objective / 1e6
    }

    /// Sum of demand-weighted route costs, in routing order.
    pub fn recompute_objective(&self) -> f64 {
        self.routing.iter().map(|r| r.demand as f64 * r.route.cost).sum()
    }

    pub fn route(&self, origin: ZoneId, airport: ZoneId) -> Option<&Route> {
        self.routing
            .iter()
            .find(|r| r.origin == origin && r.airport == airport)
            .map(|r| &r.route)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zone(id: u32, airport: bool) -> Zone {
        Zone::new(id, format!("z{id}"), 40.7, -73.9, airport).unwrap()
    }

    fn small() -> ProblemInstance {
        ProblemInstance::new(
            vec![zone(7, false), zone(8, false)],
            vec![zone(132, true)],
            vec![vec![Some(0.0), Some(5.0), Some(30.0)], vec![Some(6.0), Some(0.0), Some(25.0)]],
            vec![vec![Some(8.0)], vec![Some(9.0)]],
            vec![vec![3], vec![2]],
        )
        .unwrap()
    }

    #[test]
    fn well_formed_instance_has_empty_report() {
        assert!(small().validate().is_empty());
    }

    #[test]
    fn negative_demand_is_reported() {
        let mut inst = small();
        inst.demand[0][0] = -1;
        let report = inst.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].to_string().contains("negative demand"));
    }

    #[test]
    fn absent_direct_cost_with_demand_is_unroutable() {
        let mut inst = small();
        inst.ground_cost[1][2] = None;
        let report = inst.validate();
        assert_eq!(report, vec![Violation::UnroutableDemandPair { origin: ZoneId(8), airport: ZoneId(132) }]);
        assert!(report[0].to_string().contains("unroutable demand pair"));

        // No demand on the pair: absence is fine.
        inst.demand[1][0] = 0;
        assert!(inst.validate().is_empty());
    }

    #[test]
    fn other_violations() {
        let mut inst = small();
        inst.ground_cost[0][0] = Some(1.0);
        inst.aerial_cost[1][0] = Some(f64::NAN);
        inst.origins[1].id = ZoneId(7);
        let report = inst.validate();
        assert_eq!(report.len(), 3, "{report:?}");
    }

    #[test]
    fn shape_mismatch_rejected() {
        let inst = small();
        let err = ProblemInstance::new(
            inst.origins.clone(),
            inst.airports.clone(),
            inst.ground_cost.clone(),
            inst.aerial_cost.clone(),
            vec![vec![1]],
        );
        assert!(err.is_err());
    }

    #[test]
    fn zone_coordinates_checked() {
        assert!(Zone::new(1, "x", 91.0, 0.0, false).is_err());
        assert!(Zone::new(1, "x", 0.0, -181.0, false).is_err());
    }

    #[test]
    fn scenario_bounds() {
        assert!(Scenario::new(-1.0, 1.0, 1).is_err());
        assert!(Scenario::new(0.0, 0.9, 1).is_err());
        assert!(Scenario::new(10.0, 1.1, 3).is_ok());
        assert!(Scenario::base(3).check_against(&small()).is_err());
    }

    #[test]
    fn json_round_trip_with_absent_entries() {
        let mut inst = small();
        inst.ground_cost[1][0] = None;
        let text = inst.to_json().unwrap();
        assert!(text.contains("null"));
        assert_eq!(ProblemInstance::from_json(&text).unwrap(), inst);
    }

    #[test]
    fn enum_wire_names() {
        let s = serde_json::to_string(&Scenario::base(2).with_mode(AllocationMode::SinglePerOrigin)).unwrap();
        assert!(s.contains("\"SINGLE_PER_ORIGIN\""));
        assert!(s.contains("\"DIRECT_THEN_LOWEST_ID\""));
        let r = serde_json::to_string(&Route::via(ZoneId(5), 1.5)).unwrap();
        assert_eq!(r, r#"{"kind":"VIA_HUB","hub":5,"cost":1.5}"#);
    }

    #[test]
    fn variable_count_formula() {
        assert_eq!(small().binary_variable_count(), 4 + 2 + 2);
    }
}
