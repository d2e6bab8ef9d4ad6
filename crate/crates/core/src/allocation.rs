//! Optimal routing of every demand pair for a fixed hub set.
//!
//! Once the open hubs are known the routing problem separates per pair
//! (or per origin in single-allocation mode), so the objective of a hub set
//! is a cheap closed-form evaluation. All solvers are built on top of it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{AllocationMode, ProblemInstance, Route, RoutedPair, Scenario, TieBreak, ZoneId};

/// β·c_ij, or `None` when the ground cost is absent.
pub fn direct_cost(i: usize, j: usize, scenario: &Scenario, instance: &ProblemInstance) -> Option<f64> {
    instance.ground_to_airport(i, j).map(|c| scenario.beta * c)
}

/// β·c_ik + α + c_kj, or `None` when either leg is absent.
pub fn via_hub_cost(i: usize, j: usize, k: usize, scenario: &Scenario, instance: &ProblemInstance) -> Option<f64> {
    let ground = instance.ground_to_candidate(i, k)?;
    let air = instance.aerial(k, j)?;
    Some(scenario.beta * ground + scenario.alpha + air)
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub objective: f64,
    pub routing: Vec<RoutedPair>,
    pub direct_count: usize,
    /// Demand routed through each open hub (zero entries included).
    pub per_hub_load: BTreeMap<ZoneId, i64>,
}

/// Route for one positive-demand pair, chosen among direct travel and every hub in `hubs`.
pub fn best_route(
    origin: ZoneId,
    airport: ZoneId,
    hubs: &[ZoneId],
    scenario: &Scenario,
    instance: &ProblemInstance,
) -> Result<Route> {
    let i = instance
        .origin_index(origin)
        .ok_or_else(|| Error::Data(format!("unknown origin zone {origin}")))?;
    let j = instance
        .airport_index(airport)
        .ok_or_else(|| Error::Data(format!("unknown airport zone {airport}")))?;
    let hubs = hub_indices(hubs, instance)?;
    let table = CostTable::for_pairs(instance, scenario, vec![(i, j)]);
    let choice = table.pair_choice(0, &table.sorted_hubs(&hubs))?;
    Ok(table.route_of(0, choice))
}

pub fn evaluate_hub_set(hubs: &[ZoneId], scenario: &Scenario, instance: &ProblemInstance) -> Result<Evaluation> {
    let hubs = hub_indices(hubs, instance)?;
    CostTable::new(instance, scenario).evaluate(&hubs)
}

pub(crate) fn hub_indices(hubs: &[ZoneId], instance: &ProblemInstance) -> Result<Vec<usize>> {
    hubs.iter()
        .map(|&h| {
            instance
                .origin_index(h)
                .ok_or_else(|| Error::Data(format!("hub {h} is not a candidate zone")))
        })
        .collect()
}

#[derive(Debug, Clone)]
struct PairCosts {
    origin: usize,
    airport: usize,
    demand: i64,
    direct: f64,
    /// Indexed by candidate; `INFINITY` marks an absent leg.
    via: Vec<f64>,
}

/// Scenario-specific costs of every positive-demand pair against every
/// candidate hub, precomputed once and shared by repeated evaluations.
#[derive(Debug, Clone)]
pub struct CostTable {
    hub_ids: Vec<ZoneId>,
    airport_ids: Vec<ZoneId>,
    pairs: Vec<PairCosts>,
    /// Pair index range per origin (pairs are origin-major).
    origin_ranges: Vec<(usize, usize)>,
    mode: AllocationMode,
    tie_break: TieBreak,
}

impl CostTable {
    pub fn new(instance: &ProblemInstance, scenario: &Scenario) -> Self {
        Self::for_pairs(instance, scenario, instance.demand_pairs().collect())
    }

    fn for_pairs(instance: &ProblemInstance, scenario: &Scenario, pair_idx: Vec<(usize, usize)>) -> Self {
        let n = instance.num_origins();
        let pairs: Vec<PairCosts> = pair_idx
            .into_iter()
            .map(|(i, j)| PairCosts {
                origin: i,
                airport: j,
                demand: instance.demand[i][j],
                direct: direct_cost(i, j, scenario, instance).unwrap_or(f64::INFINITY),
                via: (0..n)
                    .map(|k| via_hub_cost(i, j, k, scenario, instance).unwrap_or(f64::INFINITY))
                    .collect(),
            })
            .collect();
        let mut origin_ranges = Vec::new();
        let mut start = 0;
        while start < pairs.len() {
            let mut end = start;
            while end < pairs.len() && pairs[end].origin == pairs[start].origin {
                end += 1;
            }
            origin_ranges.push((start, end));
            start = end;
        }
        CostTable {
            hub_ids: instance.origins.iter().map(|z| z.id).collect(),
            airport_ids: instance.airports.iter().map(|z| z.id).collect(),
            pairs,
            origin_ranges,
            mode: scenario.allocation_mode,
            tie_break: scenario.tie_break,
        }
    }

    pub fn num_candidates(&self) -> usize {
        self.hub_ids.len()
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn mode(&self) -> AllocationMode {
        self.mode
    }

    pub fn hub_id(&self, k: usize) -> ZoneId {
        self.hub_ids[k]
    }

    /// Candidate indices ordered by ascending zone id.
    pub fn sorted_hubs(&self, hubs: &[usize]) -> Vec<usize> {
        let mut v = hubs.to_vec();
        v.sort_by_key(|&k| self.hub_ids[k]);
        v.dedup();
        v
    }

    /// Hub-set key used for lexicographic tie-breaking.
    pub fn id_key(&self, hubs: &[usize]) -> Vec<ZoneId> {
        let mut ids: Vec<ZoneId> = hubs.iter().map(|&k| self.hub_ids[k]).collect();
        ids.sort();
        ids
    }

    fn unroutable(&self, p: usize) -> Error {
        Error::Unroutable {
            origin: self.hub_ids[self.pairs[p].origin],
            airport: self.airport_ids[self.pairs[p].airport],
        }
    }

    /// Best option for one pair among direct and `hubs` (ascending id order).
    /// `None` is direct.
    fn pair_choice(&self, p: usize, hubs: &[usize]) -> Result<Option<usize>> {
        let pc = &self.pairs[p];
        let mut best_hub: Option<(usize, f64)> = None;
        for &k in hubs {
            let c = pc.via[k];
            if c.is_finite() && best_hub.is_none_or(|(_, b)| c < b) {
                best_hub = Some((k, c));
            }
        }
        let choice = match (best_hub, self.tie_break) {
            (None, _) => None,
            (Some((k, c)), TieBreak::DirectThenLowestId) => (c < pc.direct).then_some(k),
            (Some((k, c)), TieBreak::HubThenLowestId) => (c <= pc.direct).then_some(k),
        };
        if choice.is_none() && !pc.direct.is_finite() {
            return Err(self.unroutable(p));
        }
        Ok(choice)
    }

    fn pair_cost(&self, p: usize, choice: Option<usize>) -> f64 {
        match choice {
            None => self.pairs[p].direct,
            Some(k) => self.pairs[p].via[k],
        }
    }

    fn route_of(&self, p: usize, choice: Option<usize>) -> Route {
        match choice {
            None => Route::direct(self.pairs[p].direct),
            Some(k) => Route::via(self.hub_ids[k], self.pairs[p].via[k]),
        }
    }

    /// Chosen option per pair.
    fn assign(&self, hubs: &[usize]) -> Result<Vec<Option<usize>>> {
        let hubs = self.sorted_hubs(hubs);
        match self.mode {
            AllocationMode::PerPair => (0..self.pairs.len()).map(|p| self.pair_choice(p, &hubs)).collect(),
            AllocationMode::SinglePerOrigin => {
                let mut out = vec![None; self.pairs.len()];
                for &(start, end) in &self.origin_ranges {
                    let mut best: Option<(Option<usize>, f64)> = None;
                    for &k in &hubs {
                        let mut total = 0.0;
                        for p in start..end {
                            let c = self.single_choice_cost(p, k);
                            total += self.pairs[p].demand as f64 * c;
                        }
                        if total.is_finite() && best.is_none_or(|(_, b)| total < b) {
                            best = Some((Some(k), total));
                        }
                    }
                    let hub = best.and_then(|(k, _)| k);
                    for (p, slot) in out.iter_mut().enumerate().take(end).skip(start) {
                        let pc = &self.pairs[p];
                        let choice = hub.filter(|&k| match self.tie_break {
                            TieBreak::DirectThenLowestId => pc.via[k] < pc.direct,
                            TieBreak::HubThenLowestId => pc.via[k] <= pc.direct,
                        });
                        if !self.pair_cost(p, choice).is_finite() {
                            return Err(self.unroutable(p));
                        }
                        *slot = choice;
                    }
                }
                Ok(out)
            }
        }
    }

    fn single_choice_cost(&self, p: usize, k: usize) -> f64 {
        let pc = &self.pairs[p];
        pc.direct.min(pc.via[k])
    }

    fn objective_of(&self, choices: &[Option<usize>]) -> f64 {
        choices
            .iter()
            .enumerate()
            .map(|(p, &c)| self.pairs[p].demand as f64 * self.pair_cost(p, c))
            .sum()
    }

    /// Objective of a hub set; `INFINITY` when some pair cannot be routed.
    pub fn objective(&self, hubs: &[usize]) -> f64 {
        match self.assign(hubs) {
            Ok(choices) => self.objective_of(&choices),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn evaluate(&self, hubs: &[usize]) -> Result<Evaluation> {
        let choices = self.assign(hubs)?;
        let objective = self.objective_of(&choices);
        let mut per_hub_load: BTreeMap<ZoneId, i64> = hubs.iter().map(|&k| (self.hub_ids[k], 0)).collect();
        let mut direct_count = 0;
        let routing = choices
            .iter()
            .enumerate()
            .map(|(p, &c)| {
                let pc = &self.pairs[p];
                match c {
                    None => direct_count += 1,
                    Some(k) => *per_hub_load.entry(self.hub_ids[k]).or_default() += pc.demand,
                }
                RoutedPair {
                    origin: self.hub_ids[pc.origin],
                    airport: self.airport_ids[pc.airport],
                    demand: pc.demand,
                    route: self.route_of(p, c),
                }
            })
            .collect();
        Ok(Evaluation {
            objective,
            routing,
            direct_count,
            per_hub_load,
        })
    }

    /// Facility-location view of the table: one client per pair (per-pair
    /// mode) or per origin (single mode), each with a weighted cost when no
    /// hub is used and a weighted cost per candidate. The objective of any
    /// hub set S equals `Σ_c min(base_c, min_{k∈S} cost_c[k])` up to
    /// floating-point association.
    pub fn clients(&self) -> Clients {
        let n = self.num_candidates();
        match self.mode {
            AllocationMode::PerPair => Clients {
                base: self.pairs.iter().map(|pc| pc.demand as f64 * pc.direct).collect(),
                cost: self
                    .pairs
                    .iter()
                    .map(|pc| pc.via.iter().map(|&v| pc.demand as f64 * v).collect())
                    .collect(),
            },
            AllocationMode::SinglePerOrigin => {
                let mut base = Vec::new();
                let mut cost = Vec::new();
                for &(start, end) in &self.origin_ranges {
                    base.push((start..end).map(|p| self.pairs[p].demand as f64 * self.pairs[p].direct).sum());
                    cost.push(
                        (0..n)
                            .map(|k| {
                                (start..end)
                                    .map(|p| self.pairs[p].demand as f64 * self.single_choice_cost(p, k))
                                    .sum()
                            })
                            .collect(),
                    );
                }
                Clients { base, cost }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Clients {
    pub base: Vec<f64>,
    pub cost: Vec<Vec<f64>>,
}
