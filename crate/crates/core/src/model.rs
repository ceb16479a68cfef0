//! Equations, integer sets and their canonical text forms.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible domain bound, and the largest `N·‖a‖₁` accepted by the
/// counting routines.
pub const MAX_DOMAIN: u64 = 1 << 31;

/// The symmetric equation `a₁x₁+⋯+a_kx_k = a₁x_{k+1}+⋯+a_kx_{2k}`.
///
/// Only the left-hand coefficients are stored; the right-hand side is
/// their mirror, so `a_{k+i} = -a_i` holds by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct Equation {
    coeffs: Vec<i32>,
}

impl Equation {
    pub fn new(coeffs: Vec<i32>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Validation(format!(
                "an equation needs at least 2 coefficients, got {}",
                coeffs.len()
            )));
        }
        if let Some(pos) = coeffs.iter().position(|&a| a == 0) {
            return Err(Error::Validation(format!(
                "coefficient a_{} is zero",
                pos + 1
            )));
        }
        Ok(Equation { coeffs })
    }

    /// Number of terms on each side.
    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i32] {
        &self.coeffs
    }

    /// `‖a‖₁ = Σ|a_i|`.
    pub fn norm1(&self) -> u64 {
        self.coeffs.iter().map(|&a| (a as i64).unsigned_abs()).sum()
    }

    /// `(a₁,…,a_k,−a₁,…,−a_k)`: the coefficients of `Σ a_i x_i = 0`.
    pub fn full_coefficients(&self) -> Vec<i64> {
        let lhs = self.coeffs.iter().map(|&a| a as i64);
        lhs.clone().chain(lhs.map(|a| -a)).collect()
    }

    /// `Σ a_i x_i` over the full coefficient vector.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<i128> {
        if assignment.len() != 2 * self.k() {
            return Err(Error::Validation(format!(
                "assignment has {} values, equation has {} variables",
                assignment.len(),
                2 * self.k()
            )));
        }
        Ok(self
            .full_coefficients()
            .iter()
            .zip(assignment.values())
            .map(|(&a, &x)| a as i128 * x as i128)
            .sum())
    }

    pub fn is_solved_by(&self, assignment: &Assignment) -> Result<bool> {
        Ok(self.evaluate(assignment)? == 0)
    }

    /// Rejects domains whose weighted sums could leave the exact range.
    pub fn check_domain(&self, domain_bound: u64) -> Result<()> {
        match domain_bound.checked_mul(self.norm1()) {
            Some(v) if v <= MAX_DOMAIN => Ok(()),
            _ => Err(Error::Range(format!(
                "N·‖a‖₁ = {}·{} exceeds {}",
                domain_bound,
                self.norm1(),
                MAX_DOMAIN
            ))),
        }
    }
}

impl TryFrom<Vec<i32>> for Equation {
    type Error = Error;

    fn try_from(coeffs: Vec<i32>) -> Result<Self> {
        Equation::new(coeffs)
    }
}

impl From<Equation> for Vec<i32> {
    fn from(eq: Equation) -> Self {
        eq.coeffs
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<i32>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Equation::new(coeffs)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

pub fn parse_equation(text: &str) -> Result<Equation> {
    text.parse()
}

/// Values `(x₁,…,x_{2k})` for the variables of an equation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment(Vec<i64>);

impl Assignment {
    pub fn new(values: Vec<i64>) -> Self {
        Assignment(values)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when all values are pairwise different.
    pub fn is_distinct(&self) -> bool {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// A finite set of integers, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct FiniteSet(Vec<i64>);

impl FiniteSet {
    pub fn new(mut values: Vec<i64>) -> Self {
        values.sort_unstable();
        values.dedup();
        FiniteSet(values)
    }

    /// Wraps values that are already strictly increasing.
    pub(crate) fn from_sorted(values: Vec<i64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
        FiniteSet(values)
    }

    pub fn elements(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<i64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }
}

impl From<Vec<i64>> for FiniteSet {
    fn from(values: Vec<i64>) -> Self {
        FiniteSet::new(values)
    }
}

impl From<FiniteSet> for Vec<i64> {
    fn from(set: FiniteSet) -> Self {
        set.0
    }
}

impl FromIterator<i64> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        FiniteSet::new(iter.into_iter().collect())
    }
}

/// A set `A ⊂ [1, N]` together with its domain bound `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntegerSet {
    elements: FiniteSet,
    domain_bound: u64,
}

impl IntegerSet {
    /// Sorts and deduplicates `values`, then checks them against `[1, domain_bound]`.
    pub fn new(values: Vec<i64>, domain_bound: u64) -> Result<Self> {
        if domain_bound == 0 || domain_bound > MAX_DOMAIN {
            return Err(Error::Range(format!(
                "domain bound {domain_bound} outside [1, {MAX_DOMAIN}]"
            )));
        }
        let elements = FiniteSet::new(values);
        if let Some(&x) = elements
            .elements()
            .iter()
            .find(|&&x| x < 1 || x as u64 > domain_bound)
        {
            return Err(Error::Range(format!(
                "element {x} outside [1, {domain_bound}]"
            )));
        }
        Ok(IntegerSet {
            elements,
            domain_bound,
        })
    }

    /// The full interval `[1, n]`.
    pub fn interval(n: u64) -> Result<Self> {
        IntegerSet::new((1..=n as i64).collect(), n)
    }

    pub(crate) fn from_sorted_unchecked(values: Vec<i64>, domain_bound: u64) -> Self {
        debug_assert!(values.iter().all(|&x| x >= 1 && x as u64 <= domain_bound));
        IntegerSet {
            elements: FiniteSet::from_sorted(values),
            domain_bound,
        }
    }

    pub fn domain_bound(&self) -> u64 {
        self.domain_bound
    }

    pub fn as_set(&self) -> &FiniteSet {
        &self.elements
    }

    /// The same elements viewed inside a larger (or smaller) domain.
    pub fn with_domain(&self, domain_bound: u64) -> Result<Self> {
        IntegerSet::new(self.elements.elements().to_vec(), domain_bound)
    }

    /// Returns a copy with `x` added; `x` must lie in the domain.
    pub fn with_element(&self, x: i64) -> Result<Self> {
        let mut v = self.elements.elements().to_vec();
        v.push(x);
        IntegerSet::new(v, self.domain_bound)
    }
}

impl Deref for IntegerSet {
    type Target = FiniteSet;

    fn deref(&self) -> &FiniteSet {
        &self.elements
    }
}

impl AsRef<FiniteSet> for IntegerSet {
    fn as_ref(&self) -> &FiniteSet {
        &self.elements
    }
}

pub fn make_set(values: Vec<i64>, domain_bound: u64) -> Result<IntegerSet> {
    IntegerSet::new(values, domain_bound)
}

/// Parses a set file: either a JSON array of integers or one integer per
/// line. Blank lines, `#` comments and a leading JSON header object
/// (a line starting with `{`) are skipped.
pub fn parse_set_text(text: &str) -> Result<Vec<i64>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str::<Vec<i64>>(trimmed)
            .map_err(|e| Error::Parse(format!("bad JSON set: {e}")));
    }
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('{') {
            continue;
        }
        let v = line
            .parse::<i64>()
            .map_err(|e| Error::Parse(format!("line {}: {line:?}: {e}", lineno + 1)))?;
        values.push(v);
    }
    Ok(values)
}

/// Canonical newline-separated set file body.
pub fn format_set_lines(set: &FiniteSet) -> String {
    let mut out = String::new();
    for x in set.iter() {
        out.push_str(&x.to_string());
        out.push('\n');
    }
    out
}
