//! Hub-set selection.
//!
//! Three methods share the [`CostTable`] evaluation: exhaustive enumeration
//! (the reference), a depth-first branch-and-bound that proves optimality,
//! and a multi-start greedy + swap local search. [`mps`] writes the full
//! integer program for cross-checking with an external MILP solver.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::allocation::CostTable;
use crate::error::{Error, Result};
use crate::model::{HubSolution, ProblemInstance, Scenario, SolverMeta, ZoneId};

mod bnb;
mod brute_force;
mod local_search;
pub mod mps;

pub use bnb::{lagrangian_bound, solve_branch_and_bound, subtree_lower_bound};
pub use brute_force::{binomial, solve_brute_force, solve_brute_force_with_cap};
pub use local_search::solve_local_search;

/// Absolute tolerance (vehicle-minutes) for incumbent comparisons.
pub const OBJECTIVE_TOLERANCE: f64 = 1e-6;

pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    BruteForce,
    BranchAndBound,
    LocalSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub method: Method,
    /// Seconds.
    pub time_limit: f64,
    pub gap_tolerance: f64,
    pub seed: u64,
    pub restarts: usize,
    pub enumeration_cap: u128,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            method: Method::BranchAndBound,
            time_limit: 3600.0,
            gap_tolerance: 0.0,
            seed: 0,
            restarts: 10,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl SolverOptions {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(self.time_limit > 0.0) {
            return Err(Error::Scenario(format!("time_limit must be > 0, got {}", self.time_limit)));
        }
        if !(self.gap_tolerance >= 0.0) {
            return Err(Error::Scenario(format!("gap_tolerance must be >= 0, got {}", self.gap_tolerance)));
        }
        Ok(())
    }
}

pub fn solve(instance: &ProblemInstance, scenario: &Scenario, options: &SolverOptions) -> Result<HubSolution> {
    options.check()?;
    match options.method {
        Method::BruteForce => solve_brute_force_with_cap(instance, scenario, options.enumeration_cap),
        Method::BranchAndBound => solve_branch_and_bound(instance, scenario, options),
        Method::LocalSearch => solve_local_search(instance, scenario, options),
    }
}

/// Incumbent with deterministic tie-breaking: lower objective wins beyond
/// [`OBJECTIVE_TOLERANCE`], otherwise the lexicographically smaller sorted
/// hub-id set wins.
#[derive(Debug, Clone)]
pub(crate) struct Incumbent {
    pub objective: f64,
    pub key: Vec<ZoneId>,
    pub hubs: Vec<usize>,
}

impl Incumbent {
    pub fn none() -> Self {
        Incumbent {
            objective: f64::INFINITY,
            key: Vec::new(),
            hubs: Vec::new(),
        }
    }

    pub fn is_set(&self) -> bool {
        self.objective.is_finite()
    }

    /// Offers a candidate; returns true if it replaced the incumbent.
    pub fn offer(&mut self, table: &CostTable, hubs: &[usize], objective: f64) -> bool {
        if !objective.is_finite() {
            return false;
        }
        let better = if objective < self.objective - OBJECTIVE_TOLERANCE {
            true
        } else if objective <= self.objective + OBJECTIVE_TOLERANCE {
            let key = table.id_key(hubs);
            if key < self.key {
                self.key = key;
                self.objective = objective;
                self.hubs = hubs.to_vec();
                return true;
            }
            false
        } else {
            false
        };
        if better {
            self.key = table.id_key(hubs);
            self.objective = objective;
            self.hubs = hubs.to_vec();
        }
        better
    }
}

pub(crate) fn build_solution(
    table: &CostTable,
    scenario: &Scenario,
    hubs: &[usize],
    meta: SolverMeta,
) -> Result<HubSolution> {
    let eval = table.evaluate(hubs)?;
    Ok(HubSolution {
        hubs: table.id_key(hubs),
        routing: eval.routing,
        objective: eval.objective,
        direct_count: eval.direct_count,
        meta,
        scenario: *scenario,
    })
}

/// Error for the case where no hub set of the requested size routes all demand.
pub(crate) fn infeasible(table: &CostTable, p: usize) -> Error {
    let all: Vec<usize> = (0..table.num_candidates()).collect();
    match table.evaluate(&all) {
        Err(e) => e,
        Ok(_) => Error::Data(format!("no hub set of size {p} routes every demand pair")),
    }
}

pub(crate) struct Stopwatch(Instant);

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch(Instant::now())
    }

    pub fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
