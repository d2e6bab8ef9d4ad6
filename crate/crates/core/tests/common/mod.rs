#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use skyport_core::synthetic::{random_instance, SyntheticSpec};
use skyport_core::{ProblemInstance, Scenario, ZoneId};

/// Instance from the oracle suite: N in 3..=15, |J| in 1..=3, demands ≤ 20.
pub fn oracle_instance<R: Rng>(rng: &mut R) -> ProblemInstance {
    let n = rng.gen_range(3..=15);
    let m = rng.gen_range(1..=3);
    random_instance(rng, SyntheticSpec::new(n, m))
}

pub fn oracle_scenario<R: Rng>(rng: &mut R, n: usize) -> Scenario {
    let alpha = [0.0, 10.0, 15.0, 20.0][rng.gen_range(0..4)];
    let beta = [1.0, 1.1][rng.gen_range(0..2)];
    Scenario::new(alpha, beta, rng.gen_range(0..=4.min(n))).unwrap()
}

/// Σ_{i,j} d_ij · min(β c_ij, min_{k∈hubs} (β c_ik + α + c_kj)), written as a
/// literal loop over the raw matrices.
pub fn literal_objective(inst: &ProblemInstance, s: &Scenario, hubs: &[usize]) -> f64 {
    let n = inst.origins.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..inst.airports.len() {
            let d = inst.demand[i][j];
            if d <= 0 {
                continue;
            }
            let mut best = match inst.ground_cost[i][n + j] {
                Some(c) => s.beta * c,
                None => f64::INFINITY,
            };
            for &k in hubs {
                if let (Some(cik), Some(ckj)) = (inst.ground_cost[i][k], inst.aerial_cost[k][j]) {
                    best = best.min(s.beta * cik + s.alpha + ckj);
                }
            }
            total += d as f64 * best;
        }
    }
    total
}

pub fn ids(inst: &ProblemInstance, hubs: &[usize]) -> Vec<ZoneId> {
    let mut v: Vec<ZoneId> = hubs.iter().map(|&k| inst.origins[k].id).collect();
    v.sort();
    v
}

/// All k-subsets of 0..n.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Minimal MPS reader sufficient for the files written by the exporter.
#[derive(Debug, Default)]
pub struct MpsModel {
    pub rows: Vec<(String, char)>,
    pub columns: Vec<String>,
    pub integer: BTreeSet<String>,
    pub entries: BTreeMap<String, Vec<(String, f64)>>,
    pub rhs: BTreeMap<String, f64>,
    pub upper: BTreeMap<String, f64>,
}

impl MpsModel {
    pub fn parse(text: &str) -> MpsModel {
        let mut model = MpsModel::default();
        let mut section = "";
        let mut in_int = false;
        for line in text.lines() {
            if line.trim().is_empty() || line.starts_with('*') {
                continue;
            }
            if !line.starts_with(' ') {
                section = line.split_whitespace().next().unwrap();
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            match section {
                "ROWS" => model.rows.push((f[1].to_string(), f[0].chars().next().unwrap())),
                "COLUMNS" => {
                    if f.len() >= 3 && f[1] == "'MARKER'" {
                        in_int = f[2] == "'INTORG'";
                        continue;
                    }
                    let col = f[0].to_string();
                    if model.columns.last() != Some(&col) {
                        model.columns.push(col.clone());
                    }
                    if in_int {
                        model.integer.insert(col.clone());
                    }
                    for pair in f[1..].chunks(2) {
                        let v: f64 = pair[1].parse().unwrap();
                        model.entries.entry(col.clone()).or_default().push((pair[0].to_string(), v));
                    }
                }
                "RHS" => {
                    for pair in f[1..].chunks(2) {
                        model.rhs.insert(pair[0].to_string(), pair[1].parse().unwrap());
                    }
                }
                "BOUNDS" => {
                    assert_eq!(f[0], "UP", "only UP bounds are written");
                    model.upper.insert(f[2].to_string(), f[3].parse().unwrap());
                }
                _ => {}
            }
        }
        model
    }

    pub fn binary_count(&self) -> usize {
        self.columns
            .iter()
            .filter(|c| self.integer.contains(*c) && self.upper.get(*c).is_some_and(|&u| u <= 1.0))
            .count()
    }

    pub fn continuous_count(&self) -> usize {
        self.columns.iter().filter(|c| !self.integer.contains(*c)).count()
    }
}
