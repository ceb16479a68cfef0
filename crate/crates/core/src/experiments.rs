//! Experiment pipelines: `R(N)` tables, digit-set size sweeps and
//! energy-bound reports.

use log::info;
use serde::Serialize;

use crate::constructions::{ruzsa_digit_set, ruzsa_equation, RuzsaParams};
use crate::counting::{find_distinct_solution, is_solution_free};
use crate::model::MAX_DOMAIN;
use crate::error::{Error, Result};
use crate::model::{Equation, IntegerSet};
use crate::search::{
    check_energy_bounds, exact_max_solution_free, random_restarts, EnergyBoundReport, SearchOptions,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RnRow {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "R")]
    pub size: usize,
    pub exact: bool,
    pub nodes_explored: u64,
    pub witness: IntegerSet,
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    /// Per-`N` budget for exact search.
    pub budget: u64,
    /// Greedy restarts per row once exact search has been abandoned.
    pub trials: u64,
    pub seed: u64,
}

/// Rows for `N = 1..=n_max`.
///
/// Exact rows seed the next search with the previous witness (a lower
/// bound) and `R(N−1)+1` (an upper bound). After the first search that
/// exhausts its budget, the remaining rows are heuristic: the best of the
/// greedy restarts, the previous witness, and any partial search result.
pub fn run_rn_table(eq: &Equation, n_max: u64, opts: &TableOptions) -> Result<Vec<RnRow>> {
    let mut rows: Vec<RnRow> = Vec::new();
    let mut exact_mode = true;
    for n in 1..=n_max {
        let previous = rows.last();
        let prev_witness = match previous {
            Some(r) => Some(r.witness.with_domain(n)?),
            None => None,
        };
        let row = if exact_mode {
            let search = SearchOptions {
                budget: opts.budget,
                lower_witness: prev_witness.clone(),
                upper_bound: previous.filter(|r| r.exact).map(|r| r.size + 1),
            };
            match exact_max_solution_free(n, eq, &search) {
                Ok(res) if res.exact => Some(RnRow {
                    n,
                    size: res.size,
                    exact: true,
                    nodes_explored: res.nodes_explored,
                    witness: res.witness,
                }),
                Ok(res) => {
                    info!("N={n}: branch and bound hit its budget, switching to heuristics");
                    exact_mode = false;
                    let mut row = heuristic_row(eq, n, opts, prev_witness.clone())?;
                    if res.size > row.size {
                        row.size = res.size;
                        row.witness = res.witness;
                    }
                    row.nodes_explored += res.nodes_explored;
                    Some(row)
                }
                Err(Error::Budget { stage, .. }) => {
                    info!("N={n}: {stage} hit its budget, switching to heuristics");
                    exact_mode = false;
                    None
                }
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let row = match row {
            Some(r) => r,
            None => heuristic_row(eq, n, opts, prev_witness)?,
        };
        info!("N={n}: R={} exact={}", row.size, row.exact);
        rows.push(row);
    }
    Ok(rows)
}

fn heuristic_row(eq: &Equation, n: u64, opts: &TableOptions, prev: Option<IntegerSet>) -> Result<RnRow> {
    let res = random_restarts(n, eq, opts.trials, opts.seed)?;
    let (size, witness) = match prev {
        Some(p) if p.len() > res.size => (p.len(), p),
        _ => (res.size, res.witness),
    };
    Ok(RnRow {
        n,
        size,
        exact: false,
        nodes_explored: res.nodes_explored,
        witness,
    })
}

/// CSV with header `N,R,exact,nodes_explored,witness`; the witness
/// column is space-separated.
pub fn rn_table_csv(rows: &[RnRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Invariant(format!("csv: {e}"));
    w.write_record(["N", "R", "exact", "nodes_explored", "witness"]).map_err(io)?;
    for r in rows {
        let witness: Vec<String> = r.witness.iter().map(|x| x.to_string()).collect();
        w.write_record([
            r.n.to_string(),
            r.size.to_string(),
            r.exact.to_string(),
            r.nodes_explored.to_string(),
            witness.join(" "),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuzsaRow {
    pub t: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub size: usize,
    /// `Some(true)` when the early-exit search found no solution within
    /// budget, `None` when the budget ran out first.
    pub solution_free: Option<bool>,
}

/// Digit-set sizes at `N = (d²k)^t` for `t = 1..=t_max`.
///
/// Each set is searched for a solution with `budget` steps; finding one
/// is an invariant error, running out of budget leaves the row unverified.
pub fn run_ruzsa_sweep(d: u64, k: u64, t_max: u32, budget: u64) -> Result<Vec<RuzsaRow>> {
    let eq = ruzsa_equation(d, k)?;
    let base = d * d * k;
    let mut rows = Vec::new();
    for t in 1..=t_max {
        let n = base
            .checked_pow(t)
            .filter(|&n| n.saturating_mul(eq.norm1()) <= MAX_DOMAIN)
            .ok_or_else(|| Error::Range(format!("({base})^{t} exceeds the domain limit")))?;
        let set = ruzsa_digit_set(&RuzsaParams::new(d, k, n)?);
        let solution_free = match find_distinct_solution(&set, &eq, budget) {
            Ok(None) => Some(true),
            Ok(Some(w)) => {
                return Err(Error::Invariant(format!("digit set at N={n} has solution {:?}", w.values())));
            }
            Err(Error::Budget { .. }) => None,
            Err(e) => return Err(e),
        };
        info!("digit set d={d} k={k} t={t}: {} elements", set.len());
        rows.push(RuzsaRow {
            t,
            n,
            size: set.len(),
            solution_free,
        });
    }
    Ok(rows)
}

/// CSV with header `t,N,size,solution_free`; unverified rows read `unknown`.
pub fn ruzsa_sweep_csv(rows: &[RuzsaRow]) -> String {
    let mut out = String::from("t,N,size,solution_free\n");
    for r in rows {
        let verified = r.solution_free.map_or("unknown".to_string(), |b| b.to_string());
        out.push_str(&format!("{},{},{},{verified}\n", r.t, r.n, r.size));
    }
    out
}

/// Points `(N, size)` for a fit, restricted to `n_min ≤ N`.
pub fn table_points(rows: &[RnRow], n_min: u64) -> Vec<(u64, u64)> {
    rows.iter()
        .filter(|r| r.n >= n_min)
        .map(|r| (r.n, r.size as u64))
        .collect()
}

/// Energy bounds for every set; a violated lower bound, or a violated
/// upper bound on a solution-free set, is an invariant error.
pub fn run_bound_report(eq: &Equation, sets: &[IntegerSet]) -> Result<Vec<EnergyBoundReport>> {
    let reports = sets
        .iter()
        .map(|s| check_energy_bounds(s, eq))
        .collect::<Result<Vec<_>>>()?;
    if let Some((i, r)) = reports.iter().enumerate().find(|(_, r)| !r.consistent()) {
        return Err(Error::Invariant(format!(
            "energy bound violated for set #{i} ({:?}): {r:?}",
            sets[i].elements()
        )));
    }
    Ok(reports)
}

/// Re-verifies every witness of a table.
pub fn verify_table(eq: &Equation, rows: &[RnRow]) -> Result<()> {
    for r in rows {
        if r.witness.len() != r.size || !is_solution_free(&r.witness, eq)? {
            return Err(Error::Invariant(format!("row N={} has an invalid witness", r.n)));
        }
    }
    Ok(())
}
