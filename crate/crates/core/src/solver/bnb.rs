//! Depth-first branch-and-bound over include/exclude decisions.
//!
//! Candidates are branched on in order of their single-hub objective (best
//! first). A node fixes a committed set `S` and leaves an available suffix `A`
//! of the ordering; the remaining candidates are excluded. Two admissible
//! bounds are combined:
//!
//! * opening every hub in `S ∪ A` (drops the cardinality limit), and
//! * `f(S)` minus the `p − |S|` largest single-candidate savings over `A`,
//!   valid because the savings function of a facility-location objective is
//!   submodular.
//!
//! A third bound relaxes the client assignment constraints. Its multipliers
//! are tuned by subgradient ascent at the root and refined for a few steps at
//! every node, warm-started from the parent.

use crate::allocation::{Clients, CostTable};
use crate::error::Result;
use crate::model::{HubSolution, ProblemInstance, Scenario, SolverMeta};

use super::{build_solution, infeasible, Incumbent, SolverOptions, Stopwatch, OBJECTIVE_TOLERANCE};

/// Lower bound on `f(T)` over all `T` with `S ⊆ T ⊆ S ∪ A` and `|T| = p`.
/// `INFINITY` when no such `T` exists or none can route all demand.
pub fn subtree_lower_bound(clients: &Clients, committed: &[usize], available: &[usize], p: usize) -> f64 {
    if committed.len() > p || committed.len() + available.len() < p {
        return f64::INFINITY;
    }
    let remaining = p - committed.len();
    let mut relaxed = 0.0;
    let mut current_total = 0.0;
    let mut savings = vec![0.0; available.len()];
    for (c, costs) in clients.cost.iter().enumerate() {
        let current = committed.iter().fold(clients.base[c], |m, &k| m.min(costs[k]));
        current_total += current;
        let mut best = current;
        for (a, &k) in available.iter().enumerate() {
            let v = costs[k];
            if v < current {
                savings[a] += current - v;
                best = best.min(v);
            }
        }
        relaxed += best;
    }
    if remaining == 0 {
        return current_total;
    }
    if !current_total.is_finite() {
        return relaxed;
    }
    savings.sort_by(|a, b| b.total_cmp(a));
    let submodular = current_total - savings.iter().take(remaining).sum::<f64>();
    relaxed.max(submodular)
}

/// Value of the assignment relaxation at multipliers `u`, with `S` forced
/// open and exactly `p − |S|` more hubs from `A`. Also returns the open set
/// of the relaxed solution.
fn relaxation(
    clients: &Clients,
    u: &[f64],
    committed: &[usize],
    available: &[usize],
    p: usize,
    reduced: &mut Vec<f64>,
    open: &mut Vec<usize>,
) -> f64 {
    let n = clients.cost.first().map_or(0, Vec::len);
    reduced.clear();
    reduced.resize(n, 0.0);
    let mut total = 0.0;
    for ((costs, &b), &uc) in clients.cost.iter().zip(&clients.base).zip(u) {
        total += uc + (b - uc).min(0.0);
        for &k in committed.iter().chain(available) {
            let v = costs[k];
            if v < uc {
                reduced[k] += v - uc;
            }
        }
    }
    let remaining = p - committed.len();
    open.clear();
    open.extend_from_slice(available);
    if remaining < open.len() {
        let r = &*reduced;
        open.select_nth_unstable_by(remaining, |&a, &b| r[a].total_cmp(&r[b]).then(a.cmp(&b)));
    }
    open.truncate(remaining);
    open.extend_from_slice(committed);
    total + open.iter().map(|&k| reduced[k]).sum::<f64>()
}

/// Subgradient ascent on the assignment relaxation starting from `u`.
/// Leaves the best multipliers found in `u` and returns their bound. Stops
/// early once the bound exceeds `target`.
pub fn lagrangian_bound(
    clients: &Clients,
    committed: &[usize],
    available: &[usize],
    p: usize,
    target: f64,
    u: &mut [f64],
    iterations: usize,
) -> f64 {
    if committed.len() > p || committed.len() + available.len() < p {
        return f64::INFINITY;
    }
    let mut reduced = Vec::new();
    let mut open = Vec::new();
    let mut best_u = u.to_vec();
    let mut best = f64::NEG_INFINITY;
    let mut step = 1.0;
    let mut stall = 0;
    for _ in 0..iterations.max(1) {
        let value = relaxation(clients, u, committed, available, p, &mut reduced, &mut open);
        if value > best {
            best = value;
            best_u.copy_from_slice(u);
            stall = 0;
        } else {
            stall += 1;
            if stall >= 5 {
                step /= 2.0;
                stall = 0;
            }
        }
        if best > target || step < 1e-4 {
            break;
        }
        let mut norm = 0.0;
        let g: Vec<f64> = clients
            .cost
            .iter()
            .zip(&clients.base)
            .zip(&*u)
            .map(|((costs, &b), &uc)| {
                let assigned = usize::from(b < uc) + open.iter().filter(|&&k| costs[k] < uc).count();
                let gc = 1.0 - assigned as f64;
                norm += gc * gc;
                gc
            })
            .collect();
        let gap = target - value;
        if norm == 0.0 || !(gap > 0.0) {
            break;
        }
        let t = step * gap / norm;
        for (uc, gc) in u.iter_mut().zip(&g) {
            *uc += t * gc;
        }
    }
    u.copy_from_slice(&best_u);
    best
}

/// Starting multipliers: each client's cost under a feasible hub set.
fn initial_multipliers(clients: &Clients, hubs: &[usize]) -> Option<Vec<f64>> {
    let u: Vec<f64> = clients
        .cost
        .iter()
        .zip(&clients.base)
        .map(|(costs, &b)| hubs.iter().fold(b, |m, &k| m.min(costs[k])))
        .collect();
    u.iter().all(|v| v.is_finite()).then_some(u)
}

const ROOT_ITERATIONS: usize = 300;
const NODE_ITERATIONS: usize = 15;

fn single_hub_order(table: &CostTable, clients: &Clients) -> Vec<usize> {
    let n = table.num_candidates();
    let value: Vec<f64> = (0..n)
        .map(|k| {
            clients
                .cost
                .iter()
                .zip(&clients.base)
                .map(|(costs, &b)| b.min(costs[k]))
                .sum()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| value[a].total_cmp(&value[b]).then(table.hub_id(a).cmp(&table.hub_id(b))));
    order
}

/// Greedy completion: repeatedly add the candidate that lowers the client
/// objective most (ties to the lower id) until `p` hubs are open.
fn greedy(table: &CostTable, clients: &Clients, start: &[usize], pool: &[usize], p: usize) -> Vec<usize> {
    let mut chosen = start.to_vec();
    let mut current: Vec<f64> = clients
        .cost
        .iter()
        .enumerate()
        .map(|(c, costs)| chosen.iter().fold(clients.base[c], |m, &k| m.min(costs[k])))
        .collect();
    while chosen.len() < p {
        let mut best: Option<(usize, f64)> = None;
        for &k in pool {
            if chosen.contains(&k) {
                continue;
            }
            let total: f64 = clients.cost.iter().zip(&current).map(|(costs, &cur)| cur.min(costs[k])).sum();
            let better = match best {
                None => true,
                Some((bk, bt)) => total < bt || (total == bt && table.hub_id(k) < table.hub_id(bk)),
            };
            if better {
                best = Some((k, total));
            }
        }
        let Some((k, _)) = best else { break };
        for (cur, costs) in current.iter_mut().zip(&clients.cost) {
            *cur = cur.min(costs[k]);
        }
        chosen.push(k);
    }
    chosen
}

struct Search<'a> {
    table: &'a CostTable,
    clients: Clients,
    order: Vec<usize>,
    p: usize,
    gap_tolerance: f64,
    time_limit: f64,
    clock: Stopwatch,
    incumbent: Incumbent,
    /// Multipliers per depth; empty when the relaxation is unusable.
    multipliers: Vec<Vec<f64>>,
    nodes: u64,
    timed_out: bool,
    /// Smallest bound among nodes left unexplored after a time-out.
    frontier_bound: f64,
}

impl Search<'_> {
    /// Bounds are sums in a different order than the objective, so the
    /// slack grows with magnitude; ties must never be pruned.
    fn prune_threshold(&self) -> f64 {
        let inc = self.incumbent.objective;
        inc - self.gap_tolerance * inc.abs() + OBJECTIVE_TOLERANCE.max(inc.abs() * 1e-12)
    }

    fn bound(&mut self, depth: usize, committed: &[usize], available: &[usize], iterations: usize) -> f64 {
        let cheap = subtree_lower_bound(&self.clients, committed, available, self.p);
        let target = self.prune_threshold();
        if cheap > target || self.multipliers.is_empty() {
            return cheap;
        }
        let (parents, rest) = self.multipliers.split_at_mut(depth + 1);
        let u = &mut rest[0];
        u.copy_from_slice(&parents[depth]);
        let lagrangian = lagrangian_bound(&self.clients, committed, available, self.p, target, u, iterations);
        cheap.max(lagrangian)
    }

    fn visit(&mut self, depth: usize, committed: &mut Vec<usize>) {
        let order = std::mem::take(&mut self.order);
        self.visit_in(&order, depth, committed);
        self.order = order;
    }

    fn visit_in(&mut self, order: &[usize], depth: usize, committed: &mut Vec<usize>) {
        let available = &order[depth..];
        if committed.len() > self.p || committed.len() + available.len() < self.p {
            return;
        }
        if self.timed_out {
            let b = self.bound(depth, committed, available, 1);
            self.frontier_bound = self.frontier_bound.min(b);
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(64) && self.clock.seconds() > self.time_limit {
            self.timed_out = true;
            let b = self.bound(depth, committed, available, 1);
            self.frontier_bound = self.frontier_bound.min(b);
            return;
        }

        let remaining = self.p - committed.len();
        if remaining == 0 || remaining == available.len() {
            let leaf: Vec<usize> = committed.iter().chain(available.iter().take(remaining)).copied().collect();
            let obj = self.table.objective(&leaf);
            self.incumbent.offer(self.table, &leaf, obj);
            return;
        }

        let bound = self.bound(depth, committed, available, NODE_ITERATIONS);
        if bound > self.prune_threshold() {
            return;
        }

        let k = order[depth];
        committed.push(k);
        self.visit_in(order, depth + 1, committed);
        committed.pop();
        self.visit_in(order, depth + 1, committed);
    }
}

pub fn solve_branch_and_bound(
    instance: &ProblemInstance,
    scenario: &Scenario,
    options: &SolverOptions,
) -> Result<HubSolution> {
    scenario.check_against(instance)?;
    options.check()?;
    let clock = Stopwatch::start();
    let table = CostTable::new(instance, scenario);
    let clients = table.clients();
    let order = single_hub_order(&table, &clients);
    let p = scenario.p;

    let mut incumbent = Incumbent::none();
    let start = greedy(&table, &clients, &[], &order, p);
    let obj = table.objective(&start);
    incumbent.offer(&table, &start, obj);
    let mut multipliers = Vec::new();
    if let Some(mut u) = initial_multipliers(&clients, &start) {
        lagrangian_bound(&clients, &[], &order, p, obj, &mut u, ROOT_ITERATIONS);
        multipliers = vec![u; order.len() + 2];
    }

    let mut search = Search {
        table: &table,
        clients,
        order,
        p,
        gap_tolerance: options.gap_tolerance,
        time_limit: options.time_limit,
        clock,
        incumbent,
        multipliers,
        nodes: 0,
        timed_out: false,
        frontier_bound: f64::INFINITY,
    };
    search.visit(0, &mut Vec::with_capacity(p));

    if !search.incumbent.is_set() {
        return Err(infeasible(&table, p));
    }
    let inc = search.incumbent.objective;
    let gap = if search.timed_out {
        let lb = search.frontier_bound.min(inc);
        if inc > 0.0 {
            ((inc - lb) / inc).max(0.0)
        } else {
            0.0
        }
    } else {
        0.0
    };
    let meta = SolverMeta {
        solver: "branch_and_bound".into(),
        iterations: search.nodes,
        wall_time_s: search.clock.seconds(),
        proven_optimal: !search.timed_out && options.gap_tolerance == 0.0,
        gap,
    };
    build_solution(&table, scenario, &search.incumbent.hubs, meta)
}
