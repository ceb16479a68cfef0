//! Solution-free sets for symmetric linear equations
//! `a₁x₁+⋯+a_kx_k = a₁x_{k+1}+⋯+a_kx_{2k}`.
//!
//! A solution is *non-trivial* when all `2k` values are pairwise
//! different; a set is solution-free when it has no non-trivial
//! solution. The crate counts solutions (representation functions,
//! energies, coincidence counts), builds the base-`d²k` digit sets,
//! computes `R(N)` exactly for small `N`, and checks the sumset
//! inequalities on concrete sets.
//!
//! Integer quantities are exact throughout. Real-valued outputs (power
//! law fits, exponents, bound ratios) are generic over
//! [`num_traits::Float`]; the aliases below fix them to `f64` or `f32`.
//!
//! ```
//! use solfree::{count_all_solutions, is_solution_free, make_set, Equation};
//!
//! let eq: Equation = "1,1".parse()?;
//! let a = make_set(vec![1, 2, 5, 7], 7)?;
//! assert_eq!(count_all_solutions(&a, &eq)?, 28);
//! assert!(is_solution_free(&a, &eq)?);
//! # Ok::<(), solfree::Error>(())
//! ```

pub mod constructions;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod model;
pub mod partitions;
pub mod search;
pub mod sumset;

pub use constructions::{
    greedy_solution_free, predicted_exponent, ruzsa_digit_set, ruzsa_equation, RuzsaParams, ScanOrder,
};
pub use counting::{
    count_all_solutions, count_coincident, count_distinct_solutions, energy, find_distinct_solution,
    is_solution_free, rep_function, solution_report, DistinctMethod, RepFunction, SolutionReport,
    DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use fit::{fit_exponent, FitResult};
pub use model::{make_set, parse_equation, Assignment, Equation, FiniteSet, IntegerSet};
pub use search::{
    build_hypergraph, check_energy_bounds, exact_max_solution_free, random_restarts, EnergyBoundReport,
    SearchOptions, SearchResult, SolutionHypergraph,
};
pub use sumset::DilateSpec;

pub type FitResult64 = FitResult<f64>;
pub type FitResult32 = FitResult<f32>;

pub fn fit_exponent_f64(points: &[(u64, u64)]) -> Result<FitResult64> {
    fit_exponent(points)
}

pub fn predicted_exponent_f64(d: u64, k: u64) -> f64 {
    predicted_exponent(d, k)
}
