mod common;

use proptest::prelude::*;
use solfree::experiments::{
    rn_table_csv, run_ruzsa_sweep, ruzsa_sweep_csv, run_bound_report, run_rn_table, table_points, verify_table, TableOptions,
};
use solfree::{
    check_energy_bounds, fit_exponent, make_set, predicted_exponent, ruzsa_digit_set, Equation, Error,
    FitResult64, IntegerSet, RuzsaParams,
};

fn eq(s: &str) -> Equation {
    s.parse().unwrap()
}

fn opts() -> TableOptions {
    TableOptions {
        budget: 10_000_000,
        trials: 10,
        seed: 3,
    }
}

#[test]
fn sidon_table_up_to_seven() {
    let rows = run_rn_table(&eq("1,1"), 7, &opts()).unwrap();
    let got: Vec<(u64, usize, bool)> = rows.iter().map(|r| (r.n, r.size, r.exact)).collect();
    // R(N) from common::brute_max_free
    let want: Vec<(u64, usize, bool)> = (1..=7)
        .map(|n| (n, common::brute_max_free(n as i64, &[1, 1]), true))
        .collect();
    assert_eq!(got, want);
    assert_eq!(got[4], (5, 4, true));
    verify_table(&eq("1,1"), &rows).unwrap();
}

#[test]
fn tables_below_the_first_edge_are_trivial() {
    for e in ["1,1", "1,2,2"] {
        let e = eq(e);
        let rows = run_rn_table(&e, 2 * e.k() as u64 - 1, &opts()).unwrap();
        assert!(rows.iter().all(|r| r.exact && r.size as u64 == r.n));
    }
}

#[test]
fn table_csv_is_deterministic() {
    let a = rn_table_csv(&run_rn_table(&eq("1,1,1"), 12, &opts()).unwrap()).unwrap();
    let b = rn_table_csv(&run_rn_table(&eq("1,1,1"), 12, &opts()).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("N,R,exact,nodes_explored,witness\n1,1,true,"));
}

#[test]
fn exhausted_budget_degrades_to_heuristic_rows() {
    let small = TableOptions {
        budget: 2_000,
        trials: 5,
        seed: 11,
    };
    let e = eq("1,1");
    let rows = run_rn_table(&e, 24, &small).unwrap();
    let first_inexact = rows.iter().position(|r| !r.exact).expect("budget should run out");
    assert!(rows[first_inexact..].iter().all(|r| !r.exact));
    assert!(rows.windows(2).all(|w| w[0].size <= w[1].size));
    verify_table(&e, &rows).unwrap();
}

#[test]
fn bound_report_examples() {
    let e = eq("1,1");
    let rows = run_rn_table(&e, 10, &opts()).unwrap();
    let witnesses: Vec<IntegerSet> = rows.into_iter().map(|r| r.witness).collect();
    let reports = run_bound_report(&e, &witnesses).unwrap();
    assert!(reports.iter().all(|r| r.lower_holds && r.upper_applicable && r.upper_holds));

    let interval = IntegerSet::interval(8).unwrap();
    let r = &run_bound_report(&e, &[interval]).unwrap()[0];
    assert!(r.lower_holds && !r.upper_applicable);

    let singles: Vec<IntegerSet> = (1..=5).map(|x| make_set(vec![x], 5).unwrap()).collect();
    for r in run_bound_report(&eq("1,2,2"), &singles).unwrap() {
        assert!(r.lower_holds && r.upper_applicable && r.upper_holds);
    }
}

#[test]
fn bound_report_rejects_empty_sets() {
    let empty = make_set(vec![], 5).unwrap();
    assert!(matches!(run_bound_report(&eq("1,1"), &[empty]), Err(Error::Validation(_))));
}

#[test]
fn digit_set_sizes_follow_the_predicted_exponent() {
    let (d, k) = (2u64, 3u64);
    let points: Vec<(u64, u64)> = (2..=5)
        .map(|t| {
            let n = 12u64.pow(t);
            (n, ruzsa_digit_set(&RuzsaParams::new(d, k, n).unwrap()).len() as u64)
        })
        .collect();
    let fit: FitResult64 = fit_exponent(&points).unwrap();
    let target: f64 = predicted_exponent(d, k);
    assert!((fit.slope - target).abs() <= 0.02);
    assert!((fit.slope - target).abs() < 1e-12);
}

#[test]
fn ruzsa_sweep_rows() {
    let rows = run_ruzsa_sweep(2, 3, 5, 1_000_000).unwrap();
    let sizes: Vec<(u64, usize)> = rows.iter().map(|r| (r.n, r.size)).collect();
    assert_eq!(sizes, [(12, 2), (144, 4), (1728, 8), (20736, 16), (248832, 32)]);
    assert!(rows[..3].iter().all(|r| r.solution_free == Some(true)));
    let csv = ruzsa_sweep_csv(&rows);
    assert!(csv.starts_with("t,N,size,solution_free\n1,12,2,true\n"));

    let tight = run_ruzsa_sweep(3, 3, 3, 5).unwrap();
    assert!(tight.iter().any(|r| r.solution_free.is_none()));
    assert!(ruzsa_sweep_csv(&tight).contains("unknown"));
    assert!(matches!(run_ruzsa_sweep(2, 2, 11, 10), Err(Error::Range(_))));
}

#[test]
fn table_points_filter() {
    let rows = run_rn_table(&eq("1,1"), 9, &opts()).unwrap();
    let pts = table_points(&rows, 8);
    assert_eq!(pts, vec![(8, 5), (9, 5)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lower_energy_bound_always_holds(values in prop::collection::vec(1i64..=30, 1..10), e in prop::sample::select(vec!["1,1", "1,2", "1,1,1", "1,2,2", "3,-5"])) {
        let e = eq(e);
        let set = make_set(values, 30).unwrap();
        let r = check_energy_bounds(&set, &e).unwrap();
        prop_assert!(r.energy * r.lower_denominator >= r.lower_numerator);
        prop_assert!(r.lower_holds);
        prop_assert!(r.energy >= (set.len() as u128).pow(e.k() as u32));
        if r.upper_applicable {
            prop_assert!(r.upper_holds);
        }
    }
}
