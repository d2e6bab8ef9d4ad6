//! Skyport location: choose `p` air-taxi hubs that minimize demand-weighted
//! travel time to airports, where each origin–airport demand either travels
//! directly by ground or rides to a hub and flies the rest of the way.
//!
//! * [`model`]: instances, scenarios, routes and solutions (JSON schema).
//! * [`ingest`]: trip CSVs and zone tables into a [`ProblemInstance`].
//! * [`allocation`]: optimal routing and objective for a fixed hub set.
//! * [`solver`]: brute force, branch-and-bound, local search, MPS export.
//! * [`queue`]: hub arrival profiles and Erlang-C capacity analytics.

// NaN-rejecting checks are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod error;
pub mod geojson;
pub mod ingest;
pub mod model;
pub mod queue;
pub mod solver;
pub mod synthetic;

pub use allocation::{best_route, evaluate_hub_set, via_hub_cost, CostTable, Evaluation};
pub use error::{Error, Result};
pub use model::{
    AllocationMode, HubSolution, ProblemInstance, Route, RouteKind, RoutedPair, Scenario, SolverMeta, TieBreak,
    Violation, Zone, ZoneId,
};
pub use solver::{solve, Method, SolverOptions};
