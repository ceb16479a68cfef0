//! Exact and heuristic computation of `R(N)`, the largest subset of
//! `[1, N]` with no solution in distinct integers.
//!
//! `R(N)` is the independence number of the solution hypergraph, whose
//! edges are the value-sets of distinct-integer solutions.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::Instant;

use num_traits::Float;
use serde::Serialize;

use crate::constructions::{greedy_with_budget, ScanOrder};
use crate::counting::{count_all_solutions, is_solution_free, DistinctSearch};
use crate::error::{Error, Result};
use crate::model::{Equation, IntegerSet};

/// 2k-uniform hypergraph on `[1, N]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionHypergraph {
    #[serde(rename = "N")]
    pub n: u64,
    pub k: usize,
    /// Sorted vertex lists, in lexicographic order.
    pub edges: Vec<Vec<u32>>,
    /// `incidence[v]` lists the edges containing vertex `v` (index 0 unused).
    #[serde(skip)]
    pub incidence: Vec<Vec<usize>>,
}

impl SolutionHypergraph {
    pub fn degree(&self, v: u32) -> usize {
        self.incidence.get(v as usize).map_or(0, Vec::len)
    }
}

/// Collects every value-set of a distinct-integer solution in `[1, N]`.
///
/// Solutions are enumerated directly (last variable solved, partial-sum
/// pruning, equal coefficients filled in increasing order), which visits
/// each edge a bounded number of times instead of testing every
/// `2k`-subset.
pub fn build_hypergraph(n: u64, eq: &Equation, budget: u64) -> Result<SolutionHypergraph> {
    if n == 0 {
        return Err(Error::Validation("N must be at least 1".into()));
    }
    eq.check_domain(n)?;
    let values: Vec<i64> = (1..=n as i64).collect();
    let full = eq.full_coefficients();
    let mut edges: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut search = DistinctSearch::canonical(&values, &full, budget);
    let _ = search
        .run(|xs| {
            let mut e: Vec<u32> = xs.iter().map(|&x| x as u32).collect();
            e.sort_unstable();
            edges.insert(e);
            ControlFlow::Continue(())
        })
        .map_err(|e| match e {
            Error::Budget { limit, .. } => Error::Budget {
                stage: "hypergraph construction",
                limit,
            },
            other => other,
        })?;
    let edges: Vec<Vec<u32>> = edges.into_iter().collect();
    let mut incidence = vec![Vec::new(); n as usize + 1];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            incidence[v as usize].push(i);
        }
    }
    Ok(SolutionHypergraph {
        n,
        k: eq.k(),
        edges,
        incidence,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub size: usize,
    pub witness: IntegerSet,
    pub exact: bool,
    pub nodes_explored: u64,
    pub time_ms: u64,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Node limit for branch and bound; also the step limit for building
    /// the hypergraph.
    pub budget: u64,
    /// A known solution-free subset of `[1, N]`; the search only looks
    /// for something strictly larger.
    pub lower_witness: Option<IntegerSet>,
    /// A proven upper bound on `R(N)`; reaching it ends the search.
    pub upper_bound: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: crate::counting::DEFAULT_BUDGET,
            lower_witness: None,
            upper_bound: None,
        }
    }
}

struct BranchAndBound<'a> {
    graph: &'a SolutionHypergraph,
    order: Vec<u32>,
    /// Included vertices per edge.
    filled: Vec<usize>,
    included: Vec<bool>,
    /// Number of edges that `v` would complete.
    blocked: Vec<u32>,
    current: Vec<u32>,
    best: Vec<u32>,
    cap: usize,
    nodes: u64,
    budget: u64,
}

impl BranchAndBound<'_> {
    fn include(&mut self, v: u32) {
        self.included[v as usize] = true;
        self.current.push(v);
        let uniform = 2 * self.graph.k;
        for &e in &self.graph.incidence[v as usize] {
            self.filled[e] += 1;
            if self.filled[e] == uniform - 1 {
                let w = self.missing(e);
                self.blocked[w as usize] += 1;
            }
        }
    }

    fn exclude_last(&mut self, v: u32) {
        let uniform = 2 * self.graph.k;
        for &e in &self.graph.incidence[v as usize] {
            if self.filled[e] == uniform - 1 {
                let w = self.missing(e);
                self.blocked[w as usize] -= 1;
            }
            self.filled[e] -= 1;
        }
        self.current.pop();
        self.included[v as usize] = false;
    }

    fn missing(&self, e: usize) -> u32 {
        *self.graph.edges[e]
            .iter()
            .find(|&&w| !self.included[w as usize])
            .expect("edge has an unincluded vertex")
    }

    /// Returns `Err` when the node budget runs out.
    fn branch(&mut self, pos: usize) -> std::result::Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if self.best.len() >= self.cap {
            return Ok(());
        }
        let open = self.order[pos..]
            .iter()
            .filter(|&&v| self.blocked[v as usize] == 0)
            .count();
        if self.current.len() + open <= self.best.len() {
            return Ok(());
        }
        let Some(offset) = self.order[pos..]
            .iter()
            .position(|&v| self.blocked[v as usize] == 0)
        else {
            return Ok(());
        };
        let next = pos + offset;
        let v = self.order[next];
        self.include(v);
        let r = self.branch(next + 1);
        self.exclude_last(v);
        r?;
        if self.best.len() >= self.cap {
            return Ok(());
        }
        self.branch(next + 1)
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Maximum independent set of the solution hypergraph by branch and bound.
///
/// Vertices are branched in descending degree order (ties: smaller
/// integer first), include before exclude. A vertex is blocked once
/// every other vertex of some edge through it is included. A node is
/// pruned when its size plus the unblocked remaining vertices cannot
/// beat the best found. If the node budget runs out the best set so far
/// is returned with `exact = false`.
pub fn exact_max_solution_free(n: u64, eq: &Equation, opts: &SearchOptions) -> Result<SearchResult> {
    let start = Instant::now();
    let graph = build_hypergraph(n, eq, opts.budget)?;
    let mut order: Vec<u32> = (1..=n as u32).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));

    let best: Vec<u32> = match &opts.lower_witness {
        Some(w) => {
            if w.iter().any(|x| x < 1 || x as u64 > n) {
                return Err(Error::Validation("lower witness lies outside [1, N]".into()));
            }
            w.iter().map(|x| x as u32).collect()
        }
        None => Vec::new(),
    };
    let mut bb = BranchAndBound {
        graph: &graph,
        order,
        filled: vec![0; graph.edges.len()],
        included: vec![false; n as usize + 1],
        blocked: vec![0; n as usize + 1],
        current: Vec::new(),
        best,
        cap: opts.upper_bound.unwrap_or(usize::MAX).min(n as usize),
        nodes: 0,
        budget: opts.budget,
    };
    let exact = bb.branch(0).is_ok();
    let witness = IntegerSet::new(bb.best.iter().map(|&v| v as i64).collect(), n)?;
    if !is_solution_free(&witness, eq)? {
        return Err(Error::Invariant(format!(
            "search witness {:?} is not solution-free",
            witness.elements()
        )));
    }
    Ok(SearchResult {
        size: witness.len(),
        witness,
        exact,
        nodes_explored: bb.nodes,
        time_ms: elapsed_ms(start),
    })
}

/// Best of `trials` greedy scans under seeded shuffles. Trial `i` uses
/// shuffle seed `seed + i`; ties keep the earliest trial.
pub fn random_restarts(n: u64, eq: &Equation, trials: u64, seed: u64) -> Result<SearchResult> {
    if trials == 0 {
        return Err(Error::Validation("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let mut best: Option<IntegerSet> = None;
    let mut steps: u64 = 0;
    for i in 0..trials {
        let (set, spent) = greedy_with_budget(n, eq, ScanOrder::SeededShuffle(seed.wrapping_add(i)), u64::MAX)?;
        steps += spent;
        if best.as_ref().is_none_or(|b| set.len() > b.len()) {
            best = Some(set);
        }
    }
    let witness = best.unwrap();
    Ok(SearchResult {
        size: witness.len(),
        witness,
        exact: false,
        nodes_explored: steps,
        time_ms: elapsed_ms(start),
    })
}

/// `E` against the lower bound `M^{2k}/(‖a‖₁N)` and, for solution-free
/// sets, the upper bound `C(2k,2)·M^{2k−2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyBoundReport {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "E")]
    pub energy: u128,
    /// `M^{2k}`.
    pub lower_numerator: u128,
    /// `‖a‖₁·N`.
    pub lower_denominator: u128,
    /// `C(2k,2)·M^{2k−2}`.
    pub upper: u128,
    pub lower_holds: bool,
    pub upper_applicable: bool,
    pub upper_holds: bool,
}

impl EnergyBoundReport {
    pub fn lower<T: Float>(&self) -> T {
        T::from(self.lower_numerator).unwrap() / T::from(self.lower_denominator).unwrap()
    }

    /// False only when a bound that must hold was violated.
    pub fn consistent(&self) -> bool {
        self.lower_holds && (!self.upper_applicable || self.upper_holds)
    }
}

pub fn check_energy_bounds(set: &IntegerSet, eq: &Equation) -> Result<EnergyBoundReport> {
    if set.is_empty() {
        return Err(Error::Validation("set must be nonempty".into()));
    }
    let energy = count_all_solutions(set, eq)?;
    let k = eq.k() as u32;
    let m = set.len() as u128;
    let too_big = || Error::Range("energy bound overflows u128".into());
    let lower_numerator = m.checked_pow(2 * k).ok_or_else(too_big)?;
    let lower_denominator = eq.norm1() as u128 * set.domain_bound() as u128;
    let pairs = (2 * k as u128) * (2 * k as u128 - 1) / 2;
    let upper = m
        .checked_pow(2 * k - 2)
        .and_then(|p| p.checked_mul(pairs))
        .ok_or_else(too_big)?;
    let lower_holds = energy
        .checked_mul(lower_denominator)
        .is_none_or(|lhs| lhs >= lower_numerator);
    let upper_applicable = is_solution_free(set, eq)?;
    Ok(EnergyBoundReport {
        m: set.len(),
        n: set.domain_bound(),
        energy,
        lower_numerator,
        lower_denominator,
        upper,
        lower_holds,
        upper_applicable,
        upper_holds: energy <= upper,
    })
}
