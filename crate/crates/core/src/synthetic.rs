//! Random instances for tests and benchmarks.

use rand::Rng;

use crate::model::{ProblemInstance, Zone};

#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub origins: usize,
    pub airports: usize,
    pub max_demand: i64,
    /// Ground minutes between distinct zones are drawn from this range.
    pub ground_minutes: (f64, f64),
    pub aerial_minutes: (f64, f64),
}

impl SyntheticSpec {
    pub fn new(origins: usize, airports: usize) -> Self {
        SyntheticSpec {
            origins,
            airports,
            max_demand: 20,
            ground_minutes: (1.0, 60.0),
            aerial_minutes: (1.0, 15.0),
        }
    }
}

/// Dense instance with uniform costs and integer demands in `0..=max_demand`.
pub fn random_instance<R: Rng>(rng: &mut R, spec: SyntheticSpec) -> ProblemInstance {
    let n = spec.origins;
    let m = spec.airports;
    let zone = |id: usize, airport: bool, rng: &mut R| Zone {
        id: (id as u32 + 1).into(),
        name: format!("zone-{}", id + 1),
        lat: 40.5 + rng.gen::<f64>() * 0.4,
        lon: -74.1 + rng.gen::<f64>() * 0.4,
        is_airport: airport,
    };
    let origins: Vec<Zone> = (0..n).map(|i| zone(i, false, rng)).collect();
    let airports: Vec<Zone> = (0..m).map(|j| zone(n + j, true, rng)).collect();
    let (glo, ghi) = spec.ground_minutes;
    let (alo, ahi) = spec.aerial_minutes;
    let ground_cost = (0..n)
        .map(|i| {
            (0..n + m)
                .map(|c| if c == i { Some(0.0) } else { Some(rng.gen_range(glo..ghi)) })
                .collect()
        })
        .collect();
    let aerial_cost = (0..n).map(|_| (0..m).map(|_| Some(rng.gen_range(alo..ahi))).collect()).collect();
    let demand = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0..=spec.max_demand)).collect())
        .collect();
    ProblemInstance {
        origins,
        airports,
        ground_cost,
        aerial_cost,
        demand,
    }
}
