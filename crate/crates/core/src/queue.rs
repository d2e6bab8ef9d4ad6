//! Post-optimization analytics: hourly hub arrival profiles, peak rates,
//! M/M/c (Erlang-C) waiting times, the largest tolerable arrival rate and
//! the resulting market penetration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{Duration, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::TripRecord;
use crate::model::{HubSolution, ProblemInstance, RouteKind, Scenario, ZoneId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandProfile {
    pub hub: ZoneId,
    /// Average arrivals per hour of day, index 0 = 00:00–00:59.
    pub hourly: [f64; 24],
    pub peak: f64,
}

impl DemandProfile {
    fn from_counts(hub: ZoneId, counts: &[u64; 24], days: usize) -> Self {
        let mut hourly = [0.0; 24];
        if days > 0 {
            for (h, &c) in counts.iter().enumerate() {
                hourly[h] = c as f64 / days as f64;
            }
        }
        let peak = hourly.iter().copied().fold(0.0, f64::max);
        DemandProfile { hub, hourly, peak }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Apply the congestion factor to the ground leg when timing arrivals.
    pub congested_access: bool,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions { congested_access: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrivalProfiles {
    pub profiles: Vec<DemandProfile>,
    /// Distinct calendar days (by pickup date) in the trip set.
    pub days: usize,
    /// Trips routed via a hub, per hub.
    pub assigned: BTreeMap<ZoneId, u64>,
    /// Airport trips whose origin is not a candidate zone of the instance.
    pub skipped_trips: u64,
}

/// Buckets each hub-routed trip by the hour of its arrival at the hub
/// (pickup time plus ground access time), averaged over calendar days.
pub fn hub_arrival_profiles(
    solution: &HubSolution,
    trips: &[TripRecord],
    scenario: &Scenario,
    instance: &ProblemInstance,
    options: ProfileOptions,
) -> Result<ArrivalProfiles> {
    let origin_idx: HashMap<ZoneId, usize> = instance.origins.iter().enumerate().map(|(i, z)| (z.id, i)).collect();
    let airports: BTreeSet<ZoneId> = instance.airports.iter().map(|z| z.id).collect();
    let routes: HashMap<(ZoneId, ZoneId), (RouteKind, Option<ZoneId>)> = solution
        .routing
        .iter()
        .map(|r| ((r.origin, r.airport), (r.route.kind, r.route.hub)))
        .collect();
    for h in &solution.hubs {
        if !origin_idx.contains_key(h) {
            return Err(Error::Data(format!("solution hub {h} is not a zone of the instance")));
        }
    }
    let factor = if options.congested_access { scenario.beta } else { 1.0 };

    let days: BTreeSet<_> = trips.iter().map(|t| t.pickup_time.date()).collect();
    let mut counts: BTreeMap<ZoneId, [u64; 24]> = solution.hubs.iter().map(|&h| (h, [0; 24])).collect();
    let mut skipped = 0;
    for t in trips {
        if !airports.contains(&t.dest_zone) {
            continue;
        }
        let Some(&i) = origin_idx.get(&t.origin_zone) else {
            skipped += 1;
            continue;
        };
        let Some(&(RouteKind::ViaHub, Some(hub))) = routes.get(&(t.origin_zone, t.dest_zone)) else {
            continue;
        };
        let k = origin_idx[&hub];
        let ground = instance.ground_to_candidate(i, k).ok_or_else(|| {
            Error::Data(format!("no ground cost from {} to hub {hub}", t.origin_zone))
        })?;
        let access_ms = (factor * ground * 60_000.0).round() as i64;
        let arrival = t.pickup_time + Duration::milliseconds(access_ms);
        counts.entry(hub).or_insert([0; 24])[arrival.hour() as usize] += 1;
    }

    let assigned = counts.iter().map(|(&h, c)| (h, c.iter().sum())).collect();
    let profiles = counts
        .iter()
        .map(|(&h, c)| DemandProfile::from_counts(h, c, days.len()))
        .collect();
    Ok(ArrivalProfiles {
        profiles,
        days: days.len(),
        assigned,
        skipped_trips: skipped,
    })
}

/// Largest peak across hubs.
pub fn lambda_max(profiles: &[DemandProfile]) -> Result<f64> {
    if profiles.is_empty() {
        return Err(Error::Undefined("lambda_max needs at least one profile".into()));
    }
    Ok(profiles.iter().map(|p| p.peak).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueSpec {
    pub servers: u32,
    /// Vehicles per hour per server.
    pub service_rate: f64,
    /// Hours.
    pub wait_target: f64,
}

impl Default for QueueSpec {
    fn default() -> Self {
        QueueSpec {
            servers: 12,
            service_rate: 2.5,
            wait_target: 5.0 / 60.0,
        }
    }
}

impl QueueSpec {
    pub fn check(&self) -> Result<()> {
        if self.servers < 1 {
            return Err(Error::Data("servers must be >= 1".into()));
        }
        if !(self.service_rate > 0.0 && self.service_rate.is_finite()) {
            return Err(Error::Data(format!("service rate must be > 0, got {}", self.service_rate)));
        }
        if !(self.wait_target >= 0.0) {
            return Err(Error::Data(format!("wait target must be >= 0, got {}", self.wait_target)));
        }
        Ok(())
    }

    pub fn capacity(&self) -> f64 {
        self.servers as f64 * self.service_rate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErlangMetrics {
    /// Probability the system is empty.
    pub p0: f64,
    /// Mean queue length.
    pub lq: f64,
    /// Mean wait in queue, in the time unit of the rates.
    pub wq: f64,
}

/// Steady-state M/M/c metrics for arrival rate `lambda`.
pub fn erlang_metrics(lambda: f64, spec: &QueueSpec) -> Result<ErlangMetrics> {
    spec.check()?;
    if !(lambda >= 0.0) {
        return Err(Error::Data(format!("arrival rate must be >= 0, got {lambda}")));
    }
    let capacity = spec.capacity();
    if lambda >= capacity {
        return Err(Error::Unstable { lambda, capacity });
    }
    if lambda == 0.0 {
        return Ok(ErlangMetrics { p0: 1.0, lq: 0.0, wq: 0.0 });
    }
    let c = spec.servers as usize;
    let a = lambda / spec.service_rate;
    let rho = lambda / capacity;
    // term = a^n / n!
    let mut term = 1.0;
    let mut head = 0.0;
    for n in 0..c {
        head += term;
        term *= a / (n + 1) as f64;
    }
    let tail = term / (1.0 - rho);
    let p0 = 1.0 / (head + tail);
    let lq = p0 * term * rho / ((1.0 - rho) * (1.0 - rho));
    Ok(ErlangMetrics { p0, lq, wq: lq / lambda })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerableRate {
    /// Vehicles per hour at which the mean wait equals the target.
    pub lambda: f64,
    pub floor: u64,
    /// True when the target is unbounded and `lambda` is the stability limit
    /// (not attained).
    pub open_bound: bool,
}

/// Solves `Wq(λ) = wait_target` on `(0, cμ)` by bisection.
pub fn lambda_tolerable(spec: &QueueSpec) -> Result<TolerableRate> {
    spec.check()?;
    let capacity = spec.capacity();
    if spec.wait_target == 0.0 {
        return Ok(TolerableRate {
            lambda: 0.0,
            floor: 0,
            open_bound: false,
        });
    }
    if spec.wait_target.is_infinite() {
        return Ok(TolerableRate {
            lambda: capacity,
            floor: capacity.floor() as u64,
            open_bound: true,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, capacity);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if erlang_metrics(mid, spec)?.wq <= spec.wait_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TolerableRate {
        lambda: lo,
        floor: lo.floor() as u64,
        open_bound: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenetrationReport {
    pub lambda_tol: f64,
    pub lambda_max: f64,
    /// `lambda_tol / lambda_max`; above 1 means full coverage.
    pub penetration: f64,
}

impl PenetrationReport {
    pub fn percent(&self) -> f64 {
        100.0 * self.penetration
    }

    /// Percentage rounded half away from zero to two decimals.
    pub fn percent_2dp(&self) -> f64 {
        (self.percent() * 100.0).round() / 100.0
    }
}

pub fn market_penetration(lambda_tol: f64, lambda_max: f64) -> Result<PenetrationReport> {
    if !(lambda_max > 0.0) {
        return Err(Error::Undefined(format!(
            "peak arrival rate is {lambda_max}; every arrival can be served (full coverage)"
        )));
    }
    Ok(PenetrationReport {
        lambda_tol,
        lambda_max,
        penetration: lambda_tol / lambda_max,
    })
}

/// Vehicles per hour for one server that flies the longest aerial leg out and
/// back, loading and unloading at each end.
pub fn service_rate_from_times(max_aerial_minutes: f64, load_unload_minutes: f64) -> Result<f64> {
    if !(max_aerial_minutes >= 0.0 && load_unload_minutes >= 0.0) {
        return Err(Error::Data("service times must be >= 0".into()));
    }
    let service = 2.0 * max_aerial_minutes + 2.0 * load_unload_minutes;
    if service <= 0.0 {
        return Err(Error::Data("round-trip service time must be > 0".into()));
    }
    Ok(60.0 / service)
}
