use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::allocation::CostTable;
use crate::error::Result;
use crate::model::{HubSolution, ProblemInstance, Scenario, SolverMeta};

use super::{build_solution, infeasible, Incumbent, SolverOptions, Stopwatch, OBJECTIVE_TOLERANCE};

/// Candidates considered at each randomized construction step.
const CANDIDATE_LIST: usize = 3;

/// Multi-start greedy construction followed by best-improvement swaps.
///
/// The first start is the deterministic greedy; later starts pick uniformly
/// among the best few additions at every step. The result is an upper bound
/// and is never flagged as proven optimal.
pub fn solve_local_search(instance: &ProblemInstance, scenario: &Scenario, options: &SolverOptions) -> Result<HubSolution> {
    scenario.check_against(instance)?;
    options.check()?;
    let clock = Stopwatch::start();
    let table = CostTable::new(instance, scenario);
    let p = scenario.p;
    let meta = |iterations| SolverMeta {
        solver: "local_search".into(),
        iterations,
        wall_time_s: clock.seconds(),
        proven_optimal: false,
        gap: 0.0,
    };
    if p == 0 {
        return build_solution(&table, scenario, &[], meta(0));
    }

    let mut best = Incumbent::none();
    let mut moves = 0u64;
    for restart in 0..options.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add(restart as u64));
        let randomized = restart > 0;
        let mut hubs = construct(&table, p, randomized.then_some(&mut rng));
        let mut obj = table.objective(&hubs);
        moves += improve(&table, &mut hubs, &mut obj);
        best.offer(&table, &hubs, obj);
        if clock.seconds() > options.time_limit {
            break;
        }
    }
    if !best.is_set() {
        return Err(infeasible(&table, p));
    }
    build_solution(&table, scenario, &best.hubs, meta(moves))
}

fn construct(table: &CostTable, p: usize, mut rng: Option<&mut ChaCha8Rng>) -> Vec<usize> {
    let n = table.num_candidates();
    let mut hubs: Vec<usize> = Vec::with_capacity(p);
    while hubs.len() < p {
        let mut trial = hubs.clone();
        trial.push(usize::MAX);
        let mut scored: Vec<(f64, usize)> = (0..n)
            .filter(|k| !hubs.contains(k))
            .map(|k| {
                *trial.last_mut().unwrap() = k;
                (table.objective(&trial), k)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(table.hub_id(a.1).cmp(&table.hub_id(b.1))));
        let pick = match rng.as_deref_mut() {
            Some(rng) => {
                let width = scored.len().min(CANDIDATE_LIST);
                scored[..width].choose(rng).map(|&(_, k)| k)
            }
            None => scored.first().map(|&(_, k)| k),
        };
        match pick {
            Some(k) => hubs.push(k),
            None => break,
        }
    }
    hubs
}

/// Applies best-improvement swaps until none improves; returns moves applied.
fn improve(table: &CostTable, hubs: &mut [usize], obj: &mut f64) -> u64 {
    let n = table.num_candidates();
    let mut moves = 0;
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for slot in 0..hubs.len() {
            let out = hubs[slot];
            for k in 0..n {
                if hubs.contains(&k) {
                    continue;
                }
                hubs[slot] = k;
                let v = table.objective(hubs);
                hubs[slot] = out;
                if v < *obj - OBJECTIVE_TOLERANCE && best.is_none_or(|(_, _, b)| v < b) {
                    best = Some((slot, k, v));
                }
            }
        }
        match best {
            Some((slot, k, v)) => {
                hubs[slot] = k;
                *obj = v;
                moves += 1;
            }
            None => return moves,
        }
    }
}
