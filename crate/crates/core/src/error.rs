use std::io;

use thiserror::Error;

use crate::model::ZoneId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("unroutable demand pair (origin {origin}, airport {airport}): no direct ground cost and no reachable hub")]
    Unroutable { origin: ZoneId, airport: ZoneId },

    #[error("enumeration of {subsets} subsets exceeds the cap of {cap} (N = {n}, p = {p})")]
    EnumerationCap {
        subsets: u128,
        cap: u128,
        n: usize,
        p: usize,
    },

    #[error("queue is unstable: arrival rate {lambda} >= capacity {capacity}")]
    Unstable { lambda: f64, capacity: f64 },

    #[error("undefined input: {0}")]
    Undefined(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
