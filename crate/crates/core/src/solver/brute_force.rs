use crate::allocation::CostTable;
use crate::error::{Error, Result};
use crate::model::{HubSolution, ProblemInstance, Scenario, SolverMeta};

use super::{build_solution, infeasible, Incumbent, Stopwatch, DEFAULT_ENUMERATION_CAP};

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn solve_brute_force(instance: &ProblemInstance, scenario: &Scenario) -> Result<HubSolution> {
    solve_brute_force_with_cap(instance, scenario, DEFAULT_ENUMERATION_CAP)
}

/// Evaluates every p-subset of candidates and keeps the best.
pub fn solve_brute_force_with_cap(instance: &ProblemInstance, scenario: &Scenario, cap: u128) -> Result<HubSolution> {
    scenario.check_against(instance)?;
    let n = instance.num_origins();
    let p = scenario.p;
    let subsets = binomial(n, p);
    if subsets > cap {
        return Err(Error::EnumerationCap { subsets, cap, n, p });
    }
    let clock = Stopwatch::start();
    let table = CostTable::new(instance, scenario);
    let mut best = Incumbent::none();
    let mut count = 0u64;
    let mut combo: Vec<usize> = (0..p).collect();
    loop {
        count += 1;
        let obj = table.objective(&combo);
        best.offer(&table, &combo, obj);
        if !next_combination(&mut combo, n) {
            break;
        }
    }
    if !best.is_set() {
        return Err(infeasible(&table, p));
    }
    let meta = SolverMeta {
        solver: "brute_force".into(),
        iterations: count,
        wall_time_s: clock.seconds(),
        proven_optimal: true,
        gap: 0.0,
    };
    build_solution(&table, scenario, &best.hubs, meta)
}

/// Advances `combo` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
