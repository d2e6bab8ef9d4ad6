//! MPS export of the full routing + location integer program.
//!
//! Variables (all binary):
//! * `x_i_j_k`: demand from origin `i` to airport `j` routed via hub `k`,
//! * `y_k`: hub `k` open,
//! * `z_i_j`: demand from `i` to `j` served directly.
//!
//! Rows: `R_i_j: Σ_k x_i_j_k + z_i_j = 1`, `O_i_j_k: x_i_j_k − y_k ≤ 0`,
//! `CARD: Σ_k y_k = p`. Indices in names are zone ids.
//!
//! Fields follow the fixed-format column positions; names longer than eight
//! characters push later fields right, which free-format readers accept.

use std::fmt::Write;

use crate::allocation::{direct_cost, via_hub_cost};
use crate::error::{Error, Result};
use crate::model::{ProblemInstance, Scenario};

pub const OBJECTIVE_ROW: &str = "COST";
pub const CARDINALITY_ROW: &str = "CARD";

pub fn export_ilp(instance: &ProblemInstance, scenario: &Scenario) -> Result<String> {
    scenario.check_against(instance)?;
    let n = instance.num_origins();
    let m = instance.num_airports();
    let oid = |i: usize| instance.origins[i].id;
    let aid = |j: usize| instance.airports[j].id;

    for i in 0..n {
        for j in 0..m {
            if instance.demand[i][j] > 0
                && direct_cost(i, j, scenario, instance).is_none()
                && (0..n).all(|k| via_hub_cost(i, j, k, scenario, instance).is_none())
            {
                return Err(Error::Unroutable {
                    origin: oid(i),
                    airport: aid(j),
                });
            }
        }
    }

    let mut out = String::with_capacity(64 * instance.binary_variable_count());
    let w = &mut out;
    // Infallible: writing to a String.
    let _ = writeln!(w, "NAME          SKYPORT");
    let _ = writeln!(w, "ROWS");
    let _ = writeln!(w, " N  {OBJECTIVE_ROW}");
    for i in 0..n {
        for j in 0..m {
            let _ = writeln!(w, " E  R_{}_{}", oid(i), aid(j));
        }
    }
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                let _ = writeln!(w, " L  O_{}_{}_{}", oid(i), aid(j), oid(k));
            }
        }
    }
    let _ = writeln!(w, " E  {CARDINALITY_ROW}");

    let _ = writeln!(w, "COLUMNS");
    let _ = writeln!(w, "    MARKER                 'MARKER'                 'INTORG'");
    let mut fixed_zero: Vec<String> = Vec::new();
    let mut all_columns: Vec<String> = Vec::with_capacity(instance.binary_variable_count());
    for i in 0..n {
        for j in 0..m {
            let d = instance.demand[i][j] as f64;
            let routing = format!("R_{}_{}", oid(i), aid(j));

            let z = format!("z_{}_{}", oid(i), aid(j));
            match direct_cost(i, j, scenario, instance) {
                Some(c) => entry(w, &z, OBJECTIVE_ROW, c * d),
                None => fixed_zero.push(z.clone()),
            }
            entry(w, &z, &routing, 1.0);
            all_columns.push(z);

            for k in 0..n {
                let x = format!("x_{}_{}_{}", oid(i), aid(j), oid(k));
                match via_hub_cost(i, j, k, scenario, instance) {
                    Some(c) => entry(w, &x, OBJECTIVE_ROW, c * d),
                    None => fixed_zero.push(x.clone()),
                }
                entry(w, &x, &routing, 1.0);
                entry(w, &x, &format!("O_{}_{}_{}", oid(i), aid(j), oid(k)), 1.0);
                all_columns.push(x);
            }
        }
    }
    for k in 0..n {
        let y = format!("y_{}", oid(k));
        for i in 0..n {
            for j in 0..m {
                entry(w, &y, &format!("O_{}_{}_{}", oid(i), aid(j), oid(k)), -1.0);
            }
        }
        entry(w, &y, CARDINALITY_ROW, 1.0);
        all_columns.push(y);
    }
    let _ = writeln!(w, "    MARKER                 'MARKER'                 'INTEND'");

    let _ = writeln!(w, "RHS");
    for i in 0..n {
        for j in 0..m {
            entry(w, "RHS", &format!("R_{}_{}", oid(i), aid(j)), 1.0);
        }
    }
    entry(w, "RHS", CARDINALITY_ROW, scenario.p as f64);

    let _ = writeln!(w, "BOUNDS");
    fixed_zero.sort();
    for col in &all_columns {
        let up = if fixed_zero.binary_search(col).is_ok() { 0.0 } else { 1.0 };
        let _ = writeln!(w, " UP BND       {:<8}  {}", col, fmt_num(up));
    }
    let _ = writeln!(w, "ENDATA");
    Ok(out)
}

fn entry(w: &mut String, column: &str, row: &str, value: f64) {
    if value == 0.0 && row == OBJECTIVE_ROW {
        return;
    }
    let _ = writeln!(w, "    {:<8}  {:<8}  {:>12}", column, row, fmt_num(value));
}

fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Zone;

    fn tiny() -> ProblemInstance {
        let z = |id, a| Zone::new(id, "z", 40.7, -73.9, a).unwrap();
        ProblemInstance::new(
            vec![z(1, false), z(2, false)],
            vec![z(9, true)],
            vec![vec![Some(0.0), Some(4.0), Some(30.0)], vec![Some(5.0), Some(0.0), None]],
            vec![vec![Some(10.0)], vec![Some(6.0)]],
            vec![vec![2], vec![0]],
        )
        .unwrap()
    }

    #[test]
    fn sections_and_counts() {
        let text = export_ilp(&tiny(), &Scenario::base(1)).unwrap();
        for section in ["NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"] {
            assert!(text.lines().any(|l| l.starts_with(section)), "missing {section}");
        }
        let bounds = text.lines().filter(|l| l.starts_with(" UP ")).count();
        assert_eq!(bounds, 8);
        // Absent direct cost fixes z_2_9 at zero.
        assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["UP", "BND", "z_2_9", "0"]));
        // Objective coefficient of x_1_9_2 = d·(c_ik + c_kj) = 2·(4 + 6).
        assert!(text
            .lines()
            .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["x_1_9_2", "COST", "20"]));
    }

    #[test]
    fn unroutable_pair_is_named() {
        let mut inst = tiny();
        inst.demand[1][0] = 3;
        inst.ground_cost[1][0] = None;
        inst.aerial_cost[1][0] = None;
        let err = export_ilp(&inst, &Scenario::base(1)).unwrap_err();
        assert!(err.to_string().contains("origin 2, airport 9"), "{err}");
    }
}
