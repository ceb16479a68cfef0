//! Representation functions, additive energies and solution counts.
//!
//! All counts are exact. Weighted sums are computed in `i64`, which is
//! safe because callers go through [`Equation::check_domain`] before
//! touching a set, and counts are accumulated in `u128` with overflow
//! reported as a range error.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Assignment, Equation, FiniteSet, IntegerSet};
use crate::partitions::SetPartitions;

/// Default limit on elementary tuple extensions for enumeration.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Dense buffers are used when at least this fraction (1/x) of the
/// attainable sum range is expected to be populated.
const DENSE_DENOMINATOR: u128 = 8;
const MAX_DENSE_SPAN: u128 = 1 << 26;

/// `m ↦ r(A₁,…,A_j; m)` restricted to attained sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepFunction {
    counts: Vec<(i64, u128)>,
    total: u128,
}

impl RepFunction {
    fn unit() -> Self {
        RepFunction {
            counts: vec![(0, 1)],
            total: 1,
        }
    }

    pub fn get(&self, m: i64) -> u128 {
        self.counts
            .binary_search_by_key(&m, |&(k, _)| k)
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    /// `Π|A_i|`, which is also the sum of all counts.
    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    /// Pairs `(m, r(m))` in increasing `m`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u128)> + '_ {
        self.counts.iter().copied()
    }

    pub fn to_map(&self) -> BTreeMap<i64, u128> {
        self.counts.iter().copied().collect()
    }

    pub fn min_key(&self) -> Option<i64> {
        self.counts.first().map(|&(m, _)| m)
    }

    pub fn max_key(&self) -> Option<i64> {
        self.counts.last().map(|&(m, _)| m)
    }

    /// `Σ_m r(m)²`.
    pub fn square_sum(&self) -> Result<u128> {
        inner_product(self, self)
    }
}

fn overflow(what: &str) -> Error {
    Error::Range(format!("{what} overflows exact arithmetic"))
}

fn scaled(set: &FiniteSet, coeff: i64) -> Result<Vec<i64>> {
    let mut v = set
        .iter()
        .map(|x| x.checked_mul(coeff).ok_or_else(|| overflow("dilate")))
        .collect::<Result<Vec<_>>>()?;
    if coeff < 0 {
        v.reverse();
    }
    Ok(v)
}

fn convolve(cur: &RepFunction, term: &[i64]) -> Result<RepFunction> {
    let (Some(lo), Some(hi)) = (cur.min_key(), cur.max_key()) else {
        return Ok(cur.clone());
    };
    if term.is_empty() {
        return Ok(RepFunction {
            counts: Vec::new(),
            total: 0,
        });
    }
    let new_lo = lo
        .checked_add(term[0])
        .ok_or_else(|| overflow("sum range"))?;
    let new_hi = hi
        .checked_add(*term.last().unwrap())
        .ok_or_else(|| overflow("sum range"))?;
    let total = cur
        .total
        .checked_mul(term.len() as u128)
        .ok_or_else(|| overflow("tuple count"))?;
    let span = (new_hi as i128 - new_lo as i128 + 1) as u128;
    let pairs = cur.counts.len() as u128 * term.len() as u128;

    let counts = if span <= MAX_DENSE_SPAN && pairs * DENSE_DENOMINATOR >= span {
        let mut buf = vec![0u128; span as usize];
        for &(m, r) in &cur.counts {
            let base = (m - lo) as usize;
            for &v in term {
                buf[base + (v - term[0]) as usize] += r;
            }
        }
        buf.into_iter()
            .enumerate()
            .filter(|&(_, r)| r > 0)
            .map(|(i, r)| (new_lo + i as i64, r))
            .collect()
    } else {
        let mut all: Vec<(i64, u128)> = Vec::with_capacity(pairs as usize);
        for &(m, r) in &cur.counts {
            for &v in term {
                all.push((m + v, r));
            }
        }
        all.sort_unstable_by_key(|&(m, _)| m);
        let mut merged: Vec<(i64, u128)> = Vec::new();
        for (m, r) in all {
            match merged.last_mut() {
                Some(last) if last.0 == m => last.1 += r,
                _ => merged.push((m, r)),
            }
        }
        merged
    };
    Ok(RepFunction { counts, total })
}

/// Representation function of `Σ c_i·A_i`; the empty system gives `{0: 1}`.
pub(crate) fn rep_of_terms(terms: &[(&FiniteSet, i64)]) -> Result<RepFunction> {
    let mut rep = RepFunction::unit();
    for &(set, coeff) in terms {
        rep = convolve(&rep, &scaled(set, coeff)?)?;
    }
    Ok(rep)
}

fn inner_product(a: &RepFunction, b: &RepFunction) -> Result<u128> {
    let (mut i, mut j) = (0, 0);
    let mut acc: u128 = 0;
    while i < a.counts.len() && j < b.counts.len() {
        let (ma, ra) = a.counts[i];
        let (mb, rb) = b.counts[j];
        match ma.cmp(&mb) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let p = ra.checked_mul(rb).ok_or_else(|| overflow("energy"))?;
                acc = acc.checked_add(p).ok_or_else(|| overflow("energy"))?;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(acc)
}

/// `r(c₁·A₁,…,c_j·A_j; m)` for every attained `m`, by iterated convolution.
pub fn rep_function(sets: &[&FiniteSet], coeffs: &[i64]) -> Result<RepFunction> {
    if sets.len() != coeffs.len() {
        return Err(Error::Validation(format!(
            "{} sets but {} coefficients",
            sets.len(),
            coeffs.len()
        )));
    }
    if sets.is_empty() {
        return Err(Error::Validation("empty system".into()));
    }
    if coeffs.contains(&0) {
        return Err(Error::Validation("zero coefficient".into()));
    }
    let terms: Vec<_> = sets.iter().copied().zip(coeffs.iter().copied()).collect();
    rep_of_terms(&terms)
}

/// `E(lhs; rhs) = Σ_m r_lhs(m)·r_rhs(m)`, the number of solutions of
/// `Σ lhs = Σ rhs`.
pub fn energy(lhs: &[(&FiniteSet, i64)], rhs: &[(&FiniteSet, i64)]) -> Result<u128> {
    if lhs.is_empty() || rhs.is_empty() {
        return Err(Error::Validation("energy needs nonempty systems".into()));
    }
    inner_product(&rep_of_terms(lhs)?, &rep_of_terms(rhs)?)
}

/// Number of tuples over `set`, one value per coefficient, with
/// `Σ c_b·x_b = 0`. Zero coefficients range freely.
pub(crate) fn count_zero_sum(set: &FiniteSet, coeffs: &[i64]) -> Result<u128> {
    let mut free: u128 = 1;
    let mut active = Vec::new();
    for &c in coeffs {
        if c == 0 {
            free = free
                .checked_mul(set.len() as u128)
                .ok_or_else(|| overflow("free factor"))?;
        } else {
            active.push(c);
        }
    }
    if free == 0 {
        return Ok(0);
    }
    let half = active.len() / 2;
    let left: Vec<_> = active[..half].iter().map(|&c| (set, c)).collect();
    let right: Vec<_> = active[half..].iter().map(|&c| (set, -c)).collect();
    let n = inner_product(&rep_of_terms(&left)?, &rep_of_terms(&right)?)?;
    n.checked_mul(free).ok_or_else(|| overflow("solution count"))
}

/// `E`: ordered `2k`-tuples over `A` solving the equation.
pub fn count_all_solutions(set: &IntegerSet, eq: &Equation) -> Result<u128> {
    eq.check_domain(set.domain_bound())?;
    let terms: Vec<_> = eq
        .coeffs()
        .iter()
        .map(|&a| (set.as_set(), a as i64))
        .collect();
    inner_product(&rep_of_terms(&terms)?, &rep_of_terms(&terms)?)
}

/// `T_{i,j}` (1-based, `i < j`): solutions with `x_i = x_j`.
pub fn count_coincident(set: &IntegerSet, eq: &Equation, i: usize, j: usize) -> Result<u128> {
    let n = 2 * eq.k();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::Validation(format!(
            "pair ({i},{j}) must satisfy 1 ≤ i < j ≤ {n}"
        )));
    }
    eq.check_domain(set.domain_bound())?;
    let full = eq.full_coefficients();
    let mut merged: Vec<i64> = Vec::with_capacity(n - 1);
    merged.push(full[i - 1] + full[j - 1]);
    merged.extend(
        full.iter()
            .enumerate()
            .filter(|&(p, _)| p != i - 1 && p != j - 1)
            .map(|(_, &c)| c),
    );
    count_zero_sum(set, &merged)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistinctMethod {
    Enumerate,
    InclusionExclusion,
}

impl std::str::FromStr for DistinctMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" => Ok(DistinctMethod::Enumerate),
            "inclusion_exclusion" | "inclusion-exclusion" => Ok(DistinctMethod::InclusionExclusion),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

/// Depth-first enumeration of distinct-valued solutions.
///
/// Slots are filled in a fixed order; the last slot is solved for, and
/// every other slot only ranges over values that keep zero inside the
/// attainable interval of the remaining partial sum.
pub(crate) struct DistinctSearch<'a> {
    values: &'a [i64],
    /// Original variable position for each slot.
    order: Vec<usize>,
    coeffs: Vec<i64>,
    /// Value fixed at slot 0 (it need not belong to `values`).
    pinned: Option<i64>,
    /// Require increasing values across adjacent slots with equal coefficients.
    ascending_runs: bool,
    suffix_min: Vec<i64>,
    suffix_max: Vec<i64>,
    used: Vec<bool>,
    slot_values: Vec<i64>,
    budget: u64,
    steps: u64,
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

impl<'a> DistinctSearch<'a> {
    /// `full` are the coefficients in original position order.
    pub(crate) fn new(values: &'a [i64], full: &[i64], budget: u64) -> Self {
        let order: Vec<usize> = (0..full.len()).collect();
        Self::with_order(values, full, order, None, false, budget)
    }

    /// Searches only for solutions where `x` occupies some position.
    /// Other slots take values from `values`, which must not contain `x`.
    pub(crate) fn pinned(values: &'a [i64], full: &[i64], pos: usize, x: i64, budget: u64) -> Self {
        let mut order = vec![pos];
        order.extend((0..full.len()).filter(|&p| p != pos));
        let mut s = Self::with_order(values, full, order, Some(x), false, budget);
        // rest of the slots are interchangeable within equal coefficients
        s.sort_tail_by_coeff();
        s.ascending_runs = true;
        s
    }

    /// Existence-oriented search: slots sorted by coefficient and equal
    /// coefficients filled in increasing order, so each value-set is
    /// visited far fewer times. Not suitable for counting.
    pub(crate) fn canonical(values: &'a [i64], full: &[i64], budget: u64) -> Self {
        let mut order: Vec<usize> = (0..full.len()).collect();
        order.sort_by_key(|&p| (full[p], p));
        Self::with_order(values, full, order, None, true, budget)
    }

    fn with_order(
        values: &'a [i64],
        full: &[i64],
        order: Vec<usize>,
        pinned: Option<i64>,
        ascending_runs: bool,
        budget: u64,
    ) -> Self {
        let coeffs: Vec<i64> = order.iter().map(|&p| full[p]).collect();
        let mut s = DistinctSearch {
            values,
            order,
            coeffs,
            pinned,
            ascending_runs,
            suffix_min: Vec::new(),
            suffix_max: Vec::new(),
            used: vec![false; values.len()],
            slot_values: vec![0; full.len()],
            budget,
            steps: 0,
        };
        s.compute_bounds();
        s
    }

    fn sort_tail_by_coeff(&mut self) {
        let mut tail: Vec<(i64, usize)> = self.coeffs[1..]
            .iter()
            .copied()
            .zip(self.order[1..].iter().copied())
            .collect();
        tail.sort();
        for (i, (c, p)) in tail.into_iter().enumerate() {
            self.coeffs[i + 1] = c;
            self.order[i + 1] = p;
        }
        self.compute_bounds();
    }

    fn compute_bounds(&mut self) {
        let n = self.coeffs.len();
        let (lo, hi) = match (self.values.first(), self.values.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0, 0),
        };
        self.suffix_min = vec![0; n + 1];
        self.suffix_max = vec![0; n + 1];
        for s in (0..n).rev() {
            let c = self.coeffs[s];
            let (a, b) = (c * lo, c * hi);
            self.suffix_min[s] = self.suffix_min[s + 1] + a.min(b);
            self.suffix_max[s] = self.suffix_max[s + 1] + a.max(b);
        }
    }

    pub(crate) fn steps(&self) -> u64 {
        self.steps
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::Budget {
                stage: "distinct-solution enumeration",
                limit: self.budget,
            });
        }
        Ok(())
    }

    /// Calls `visit` with each solution in original position order.
    pub(crate) fn run<F>(&mut self, mut visit: F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        let n = self.coeffs.len();
        if n == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        let mut out = vec![0i64; n];
        match self.pinned {
            Some(x) => {
                if self.values.binary_search(&x).is_ok() {
                    return Err(Error::Invariant(format!(
                        "pinned value {x} must lie outside the searched set"
                    )));
                }
                self.slot_values[0] = x;
                self.descend(1, self.coeffs[0] * x, &mut out, &mut visit)
            }
            None => self.descend(0, 0, &mut out, &mut visit),
        }
    }

    fn emit<F>(&mut self, out: &mut [i64], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        for (slot, &p) in self.order.iter().enumerate() {
            out[p] = self.slot_values[slot];
        }
        visit(out)
    }

    fn lower_limit(&self, slot: usize) -> Option<i64> {
        let first_free = usize::from(self.pinned.is_some());
        if self.ascending_runs && slot > first_free && self.coeffs[slot - 1] == self.coeffs[slot] {
            Some(self.slot_values[slot - 1])
        } else {
            None
        }
    }

    fn descend<F>(
        &mut self,
        slot: usize,
        partial: i64,
        out: &mut [i64],
        visit: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[i64]) -> ControlFlow<()>,
    {
        let n = self.coeffs.len();
        let c = self.coeffs[slot];
        if slot + 1 == n {
            self.tick()?;
            if partial % c != 0 {
                return Ok(ControlFlow::Continue(()));
            }
            let x = -partial / c;
            if self.lower_limit(slot).is_some_and(|lim| x <= lim) {
                return Ok(ControlFlow::Continue(()));
            }
            let Ok(idx) = self.values.binary_search(&x) else {
                return Ok(ControlFlow::Continue(()));
            };
            if self.used[idx] {
                return Ok(ControlFlow::Continue(()));
            }
            self.slot_values[slot] = x;
            return Ok(self.emit(out, visit));
        }
        // c·x must land in [low, high] for the remaining slots to reach zero.
        let low = -partial - self.suffix_max[slot + 1];
        let high = -partial - self.suffix_min[slot + 1];
        let (mut xmin, xmax) = if c > 0 {
            (div_ceil(low, c), div_floor(high, c))
        } else {
            (div_ceil(-high, -c), div_floor(-low, -c))
        };
        if let Some(lim) = self.lower_limit(slot) {
            xmin = xmin.max(lim + 1);
        }
        if xmin > xmax {
            return Ok(ControlFlow::Continue(()));
        }
        let start = self.values.partition_point(|&v| v < xmin);
        let end = self.values.partition_point(|&v| v <= xmax);
        for idx in start..end {
            if self.used[idx] {
                continue;
            }
            self.tick()?;
            let x = self.values[idx];
            self.used[idx] = true;
            self.slot_values[slot] = x;
            let flow = self.descend(slot + 1, partial + c * x, out, visit);
            self.used[idx] = false;
            if flow? == ControlFlow::Break(()) {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Solutions with all `2k` values pairwise different.
pub fn count_distinct_solutions(
    set: &IntegerSet,
    eq: &Equation,
    method: DistinctMethod,
    budget: u64,
) -> Result<u128> {
    eq.check_domain(set.domain_bound())?;
    match method {
        DistinctMethod::Enumerate => {
            let full = eq.full_coefficients();
            let mut search = DistinctSearch::new(set.elements(), &full, budget);
            let mut count: u128 = 0;
            let _ = search.run(|_| {
                count += 1;
                ControlFlow::Continue(())
            })?;
            Ok(count)
        }
        DistinctMethod::InclusionExclusion => distinct_by_inclusion_exclusion(set.as_set(), eq),
    }
}

/// `Σ_π μ(0̂,π)·N_π` over set partitions `π` of the variables, where `N_π`
/// counts solutions with variables merged blockwise and
/// `μ(0̂,π) = Π_B (−1)^{|B|−1}(|B|−1)!`.
fn distinct_by_inclusion_exclusion(set: &FiniteSet, eq: &Equation) -> Result<u128> {
    let full = eq.full_coefficients();
    let mut acc: i128 = 0;
    for partition in SetPartitions::new(full.len()) {
        let blocks = partition.block_count();
        let mut merged = vec![0i64; blocks];
        for (var, &b) in partition.labels().iter().enumerate() {
            merged[b] += full[var];
        }
        let n_pi = count_zero_sum(set, &merged)?;
        let mu = partition.mobius_weight();
        let term = i128::try_from(n_pi)
            .ok()
            .and_then(|n| n.checked_mul(mu))
            .ok_or_else(|| overflow("inclusion-exclusion term"))?;
        acc = acc
            .checked_add(term)
            .ok_or_else(|| overflow("inclusion-exclusion sum"))?;
    }
    u128::try_from(acc).map_err(|_| {
        Error::Invariant(format!("inclusion-exclusion produced negative count {acc}"))
    })
}

/// Some distinct-valued solution in `A`, if any exists.
pub fn find_distinct_solution(
    set: &IntegerSet,
    eq: &Equation,
    budget: u64,
) -> Result<Option<Assignment>> {
    eq.check_domain(set.domain_bound())?;
    let full = eq.full_coefficients();
    let mut search = DistinctSearch::canonical(set.elements(), &full, budget);
    let mut found = None;
    let _ = search.run(|xs| {
        found = Some(Assignment::new(xs.to_vec()));
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Some distinct-valued solution in `A ∪ {x}` that uses `x`, assuming
/// `x ∉ A`.
///
/// Only left-hand positions with pairwise different coefficients are
/// tried for `x`: swapping sides, or swapping two positions with equal
/// coefficients, maps solutions to solutions.
pub fn find_distinct_solution_with(
    set: &IntegerSet,
    eq: &Equation,
    x: i64,
    budget: u64,
) -> Result<Option<Assignment>> {
    find_with_steps(set, eq, x, budget).map(|(found, _)| found)
}

/// As [`find_distinct_solution_with`], also returning the steps spent.
pub(crate) fn find_with_steps(
    set: &IntegerSet,
    eq: &Equation,
    x: i64,
    budget: u64,
) -> Result<(Option<Assignment>, u64)> {
    let bound = set.domain_bound().max(x.max(1) as u64);
    eq.check_domain(bound)?;
    if set.contains(x) {
        return Err(Error::Validation(format!("{x} already belongs to the set")));
    }
    let full = eq.full_coefficients();
    let mut seen = Vec::new();
    let mut spent = 0;
    for pos in 0..eq.k() {
        if seen.contains(&full[pos]) {
            continue;
        }
        seen.push(full[pos]);
        let mut search = DistinctSearch::pinned(set.elements(), &full, pos, x, budget - spent);
        let mut found = None;
        let _ = search.run(|xs| {
            found = Some(Assignment::new(xs.to_vec()));
            ControlFlow::Break(())
        })?;
        spent += search.steps();
        if found.is_some() {
            return Ok((found, spent));
        }
    }
    Ok((None, spent))
}

/// True iff `A` has no solution in distinct integers.
pub fn is_solution_free(set: &IntegerSet, eq: &Equation) -> Result<bool> {
    Ok(find_distinct_solution(set, eq, u64::MAX)?.is_none())
}

/// `E`, the distinct count and every `T_{i,j}` for one set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionReport {
    #[serde(rename = "E")]
    pub total: u128,
    pub distinct: u128,
    /// `((i, j), T_{i,j})` for `1 ≤ i < j ≤ 2k`, in lexicographic order.
    #[serde(serialize_with = "serialize_pairs")]
    pub coincident: Vec<((usize, usize), u128)>,
}

fn serialize_pairs<S: serde::Serializer>(
    pairs: &[((usize, usize), u128)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(pairs.len()))?;
    for ((i, j), t) in pairs {
        map.serialize_entry(&format!("{i},{j}"), t)?;
    }
    map.end()
}

impl SolutionReport {
    pub fn coincidence_sum(&self) -> u128 {
        self.coincident.iter().map(|&(_, t)| t).sum()
    }
}

pub fn solution_report(set: &IntegerSet, eq: &Equation) -> Result<SolutionReport> {
    let total = count_all_solutions(set, eq)?;
    let distinct = count_distinct_solutions(set, eq, DistinctMethod::InclusionExclusion, 0)?;
    let n = 2 * eq.k();
    let mut coincident = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            coincident.push(((i, j), count_coincident(set, eq, i, j)?));
        }
    }
    Ok(SolutionReport {
        total,
        distinct,
        coincident,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::make_set;

    fn eq(s: &str) -> Equation {
        s.parse().unwrap()
    }

    fn set(v: &[i64], n: u64) -> IntegerSet {
        make_set(v.to_vec(), n).unwrap()
    }

    #[test]
    fn rep_function_examples() {
        let a = FiniteSet::new(vec![1, 2, 3]);
        let r = rep_function(&[&a, &a], &[1, 1]).unwrap();
        let expected: BTreeMap<i64, u128> = [(2, 1), (3, 2), (4, 3), (5, 2), (6, 1)].into();
        assert_eq!(r.to_map(), expected);
        assert_eq!(r.total(), 9);

        let s = FiniteSet::new(vec![5]);
        assert_eq!(rep_function(&[&s], &[7]).unwrap().to_map(), [(35, 1)].into());

        let b = FiniteSet::new(vec![1, 2]);
        let r = rep_function(&[&b, &b], &[1, -1]).unwrap();
        assert_eq!(r.to_map(), [(-1, 1), (0, 2), (1, 1)].into());
    }

    #[test]
    fn rep_function_errors() {
        let a = FiniteSet::new(vec![1]);
        assert!(matches!(rep_function(&[&a, &a], &[1]), Err(Error::Validation(_))));
        assert!(matches!(rep_function(&[], &[]), Err(Error::Validation(_))));
        assert!(matches!(rep_function(&[&a], &[0]), Err(Error::Validation(_))));
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        // far-apart elements force the sparse path, an interval the dense one
        let sparse = FiniteSet::new(vec![1, 1000, 1_000_000]);
        let r = rep_function(&[&sparse, &sparse, &sparse], &[1, 2, -3]).unwrap();
        assert_eq!(r.total(), 27);
        assert_eq!(r.iter().map(|(_, c)| c).sum::<u128>(), 27);
        let dense: FiniteSet = (1..=40).collect();
        let r = rep_function(&[&dense, &dense], &[1, 1]).unwrap();
        assert_eq!(r.support_len(), 79);
        assert_eq!(r.get(41), 40);
    }

    #[test]
    fn energy_examples() {
        let a = FiniteSet::new(vec![1, 2, 3]);
        assert_eq!(energy(&[(&a, 1), (&a, 1)], &[(&a, 1), (&a, 1)]).unwrap(), 19);
        let one = FiniteSet::new(vec![1]);
        assert_eq!(energy(&[(&one, 1)], &[(&one, 1)]).unwrap(), 1);
        let lo = FiniteSet::new(vec![1, 2]);
        let hi = FiniteSet::new(vec![3, 4]);
        assert_eq!(energy(&[(&lo, 1)], &[(&hi, 1)]).unwrap(), 0);
    }

    #[test]
    fn count_all_examples() {
        assert_eq!(count_all_solutions(&set(&[1, 2, 3], 3), &eq("1,1")).unwrap(), 19);
        for e in ["1,1", "1,2,2", "3,-5", "2,7,1,1"] {
            assert_eq!(count_all_solutions(&set(&[9], 9), &eq(e)).unwrap(), 1);
        }
        assert_eq!(count_all_solutions(&set(&[1, 2], 2), &eq("1,1,1")).unwrap(), 20);
    }

    #[test]
    fn coincident_examples() {
        let a = set(&[1, 2, 3], 3);
        assert_eq!(count_coincident(&a, &eq("1,1"), 1, 3).unwrap(), 9);
        // 2x₁ = x₃ + x₄ over {1,2,3}: 1 + 3 + 1
        assert_eq!(count_coincident(&a, &eq("1,1"), 1, 2).unwrap(), 5);
        let single = set(&[5], 5);
        for (i, j) in [(1, 2), (1, 4), (3, 6)] {
            assert_eq!(count_coincident(&single, &eq("1,2,2"), i, j).unwrap(), 1);
        }
        assert!(count_coincident(&a, &eq("1,1"), 2, 2).is_err());
        assert!(count_coincident(&a, &eq("1,1"), 0, 2).is_err());
        assert!(count_coincident(&a, &eq("1,1"), 1, 5).is_err());
    }

    #[test]
    fn distinct_examples() {
        for method in [DistinctMethod::Enumerate, DistinctMethod::InclusionExclusion] {
            let c = |v: &[i64], e: &str| {
                count_distinct_solutions(&set(v, 10), &eq(e), method, DEFAULT_BUDGET).unwrap()
            };
            assert_eq!(c(&[1, 2, 3], "1,1"), 0);
            assert_eq!(c(&[1, 2, 3, 4], "1,1"), 8);
            // brute force over 6⁶ tuples
            assert_eq!(c(&[1, 2, 3, 4, 5, 7], "1,1,1"), 72);
        }
    }

    #[test]
    fn enumeration_budget_is_an_error() {
        let a = set(&(1..=20).collect::<Vec<_>>(), 20);
        let r = count_distinct_solutions(&a, &eq("1,1,1"), DistinctMethod::Enumerate, 1000);
        assert!(matches!(r, Err(Error::Budget { limit: 1000, .. })));
        assert!(matches!(find_distinct_solution(&a, &eq("1,2,3"), 3), Err(Error::Budget { .. })));
    }

    #[test]
    fn solution_free_examples() {
        assert!(is_solution_free(&set(&[1, 2, 3, 4, 5, 6], 6), &eq("1,1,1")).unwrap());
        assert!(!is_solution_free(&set(&[1, 2, 3, 4, 5, 7], 7), &eq("1,1,1")).unwrap());
        assert!(is_solution_free(&set(&[1, 2, 5, 7], 7), &eq("1,1")).unwrap());
        let w = find_distinct_solution(&set(&[1, 2, 3, 4, 5, 7], 7), &eq("1,1,1"), u64::MAX)
            .unwrap()
            .unwrap();
        assert!(w.is_distinct());
        assert!(eq("1,1,1").is_solved_by(&w).unwrap());
    }

    #[test]
    fn solutions_through_a_new_element() {
        let a = set(&[1, 2, 3], 10);
        let w = find_distinct_solution_with(&a, &eq("1,1"), 4, u64::MAX).unwrap().unwrap();
        assert!(w.values().contains(&4) && w.is_distinct());
        assert!(find_distinct_solution_with(&a, &eq("1,1"), 7, u64::MAX).unwrap().is_none());
        assert!(find_distinct_solution_with(&a, &eq("1,1"), 2, u64::MAX).is_err());
        // x at a right-hand position only: 2·1 + 3 = 2·x₃ + ... covered by side symmetry
        let b = set(&[1, 3, 5], 10);
        let e = eq("2,1");
        let found = find_distinct_solution_with(&b, &e, 2, u64::MAX).unwrap();
        let brute = [1i64, 3, 5, 2].iter().any(|&p| {
            [1i64, 3, 5, 2].iter().any(|&q| {
                [1i64, 3, 5, 2].iter().any(|&r| {
                    [1i64, 3, 5, 2].iter().any(|&s| {
                        let v = [p, q, r, s];
                        v.contains(&2)
                            && Assignment::new(v.to_vec()).is_distinct()
                            && 2 * p + q == 2 * r + s
                    })
                })
            })
        });
        assert_eq!(found.is_some(), brute);
    }

    #[test]
    fn report_is_consistent() {
        let a = set(&[1, 2, 3, 4, 5, 7], 7);
        let r = solution_report(&a, &eq("1,1,1")).unwrap();
        assert_eq!(r.distinct, 72);
        assert_eq!(r.coincident.len(), 15);
        assert!(r.total >= r.distinct);
        assert!(r.total >= 6u128.pow(3));
        let free = set(&[1, 2, 5, 7], 7);
        let r = solution_report(&free, &eq("1,1")).unwrap();
        assert_eq!((r.total, r.distinct), (28, 0));
        assert!(r.total <= r.coincidence_sum());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["E"], 28);
        assert_eq!(v["coincident"]["1,3"], 16);
    }

    #[test]
    fn domain_precondition_is_enforced() {
        let a = set(&[1, 1 << 30], 1 << 30);
        assert!(matches!(count_all_solutions(&a, &eq("1,1,1")), Err(Error::Range(_))));
    }
}
