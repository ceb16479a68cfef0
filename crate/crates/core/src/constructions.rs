//! Explicit solution-free sets: the base-`d²k` digit construction and
//! greedy baselines.

use num_traits::Float;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::counting::find_with_steps;
use crate::error::{Error, Result};
use crate::model::{Equation, IntegerSet, MAX_DOMAIN};

/// Parameters of the digit construction; `base = d²·k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RuzsaParams {
    pub d: u64,
    pub k: u64,
    pub base: u64,
    #[serde(rename = "N")]
    pub n: u64,
}

impl RuzsaParams {
    pub fn new(d: u64, k: u64, n: u64) -> Result<Self> {
        if d < 2 || k < 2 {
            return Err(Error::Validation(format!("need d ≥ 2 and k ≥ 2, got d={d}, k={k}")));
        }
        if n == 0 || n > MAX_DOMAIN {
            return Err(Error::Range(format!("N = {n} outside [1, {MAX_DOMAIN}]")));
        }
        let base = d
            .checked_mul(d)
            .and_then(|v| v.checked_mul(k))
            .filter(|&b| b <= MAX_DOMAIN)
            .ok_or_else(|| Error::Range(format!("base d²k too large for d={d}, k={k}")))?;
        Ok(RuzsaParams { d, k, base, n })
    }
}

/// `x₁ + d(x₂+⋯+x_k) = x_{k+1} + d(x_{k+2}+⋯+x_{2k})`.
pub fn ruzsa_equation(d: u64, k: u64) -> Result<Equation> {
    if d < 2 || k < 2 {
        return Err(Error::Validation(format!("need d ≥ 2 and k ≥ 2, got d={d}, k={k}")));
    }
    let d = i32::try_from(d).map_err(|_| Error::Range(format!("d = {d} exceeds i32")))?;
    if k > 4096 {
        return Err(Error::Range(format!("k = {k} is too large")));
    }
    let mut coeffs = vec![d; k as usize];
    coeffs[0] = 1;
    Equation::new(coeffs)
}

/// Integers in `[1, N]` whose base-`d²k` digits all lie in `0..d`.
///
/// The `t`-th such integer (counting from 0) is obtained by reading the
/// base-`d` digits of `t` as base-`d²k` digits; that map is increasing,
/// so the output is produced in sorted order.
pub fn ruzsa_digit_set(params: &RuzsaParams) -> IntegerSet {
    let RuzsaParams { d, base, n, .. } = *params;
    let mut out = Vec::new();
    let mut t: u64 = 1;
    loop {
        let mut rest = t;
        let mut value: u64 = 0;
        let mut place: u64 = 1;
        let mut overflowed = false;
        while rest > 0 {
            let digit = rest % d;
            value += digit * place;
            rest /= d;
            if rest > 0 {
                match place.checked_mul(base) {
                    Some(p) if p <= n => place = p,
                    _ => {
                        overflowed = true;
                        break;
                    }
                }
            }
        }
        if overflowed || value > n {
            break;
        }
        out.push(value as i64);
        t += 1;
    }
    IntegerSet::from_sorted_unchecked(out, n)
}

/// Base-`b` digits of `x`, least significant first.
pub fn digits(mut x: u64, base: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while x > 0 {
        out.push(x % base);
        x /= base;
    }
    out
}

/// Growth exponent `log d / log(d²k)` of the digit set.
pub fn predicted_exponent<T: Float>(d: u64, k: u64) -> T {
    let d = T::from(d).unwrap();
    let k = T::from(k).unwrap();
    d.ln() / (d * d * k).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOrder {
    Ascending,
    SeededShuffle(u64),
}

/// Candidates in scan order.
pub fn scan_order(n: u64, order: ScanOrder) -> Vec<i64> {
    let mut v: Vec<i64> = (1..=n as i64).collect();
    if let ScanOrder::SeededShuffle(seed) = order {
        v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    v
}

/// Greedy scan: keep each candidate whose addition creates no solution
/// in distinct integers. The result is maximal within `[1, N]`.
pub fn greedy_solution_free(n: u64, eq: &Equation, order: ScanOrder) -> Result<IntegerSet> {
    greedy_with_budget(n, eq, order, u64::MAX).map(|(set, _)| set)
}

/// Greedy scan returning the number of enumeration steps spent.
pub fn greedy_with_budget(
    n: u64,
    eq: &Equation,
    order: ScanOrder,
    budget: u64,
) -> Result<(IntegerSet, u64)> {
    if n == 0 {
        return Err(Error::Validation("N must be at least 1".into()));
    }
    eq.check_domain(n)?;
    let mut chosen: Vec<i64> = Vec::new();
    let mut spent: u64 = 0;
    for x in scan_order(n, order) {
        let current = IntegerSet::new(chosen.clone(), n)?;
        let left = budget.saturating_sub(spent);
        // a distinct solution needs 2k values
        let conflict = if chosen.len() + 1 >= 2 * eq.k() {
            let (found, steps) = find_with_steps(&current, eq, x, left)?;
            spent += steps;
            found.is_some()
        } else {
            false
        };
        if !conflict {
            chosen.push(x);
        }
    }
    Ok((IntegerSet::new(chosen, n)?, spent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::is_solution_free;

    fn digit_set_by_testing(d: u64, k: u64, n: u64) -> Vec<i64> {
        let base = d * d * k;
        (1..=n)
            .filter(|&x| digits(x, base).iter().all(|&g| g < d))
            .map(|x| x as i64)
            .collect()
    }

    #[test]
    fn equation_examples() {
        let eq = ruzsa_equation(2, 3).unwrap();
        assert_eq!((eq.coeffs(), eq.norm1()), (&[1, 2, 2][..], 5));
        let eq = ruzsa_equation(3, 2).unwrap();
        assert_eq!((eq.coeffs(), eq.norm1()), (&[1, 3][..], 4));
        let eq = ruzsa_equation(2, 2).unwrap();
        assert_eq!((eq.coeffs(), eq.norm1()), (&[1, 2][..], 3));
        assert!(ruzsa_equation(1, 3).is_err());
        assert!(ruzsa_equation(2, 1).is_err());
    }

    #[test]
    fn digit_set_examples() {
        let s = ruzsa_digit_set(&RuzsaParams::new(2, 3, 144).unwrap());
        assert_eq!(s.elements(), &[1, 12, 13, 144]);
        let s = ruzsa_digit_set(&RuzsaParams::new(2, 3, 1728).unwrap());
        assert_eq!(s.elements(), &[1, 12, 13, 144, 145, 156, 157, 1728]);
        let s = ruzsa_digit_set(&RuzsaParams::new(2, 3, 11).unwrap());
        assert_eq!(s.elements(), &[1]);
        assert_eq!(s.domain_bound(), 11);
    }

    #[test]
    fn digit_set_matches_per_integer_test() {
        for (d, k) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
            for n in [1, 7, 100, 1000, 5000] {
                let s = ruzsa_digit_set(&RuzsaParams::new(d, k, n).unwrap());
                assert_eq!(s.elements(), &digit_set_by_testing(d, k, n)[..], "d={d} k={k} N={n}");
            }
        }
    }

    #[test]
    fn digit_set_near_domain_limit() {
        let p = RuzsaParams::new(2, 2, MAX_DOMAIN).unwrap();
        let s = ruzsa_digit_set(&p);
        // 2^31 = 2·8^10: every 0/1 string of up to 11 octal digits fits
        assert_eq!(s.len(), (1 << 11) - 1);
    }

    #[test]
    fn exact_size_law() {
        for (d, k) in [(2u64, 2u64), (2, 3), (3, 2), (3, 3)] {
            let base = d * d * k;
            for t in 1..=4u32 {
                let s = ruzsa_digit_set(&RuzsaParams::new(d, k, base.pow(t)).unwrap());
                assert_eq!(s.len() as u64, d.pow(t));
            }
        }
    }

    #[test]
    fn weighted_sums_are_carry_free() {
        for (d, k) in [(2u64, 2u64), (2, 3), (3, 2), (3, 3)] {
            let base = d * d * k;
            let a = ruzsa_digit_set(&RuzsaParams::new(d, k, base.pow(3)).unwrap());
            let weights: Vec<u64> = std::iter::once(1).chain(std::iter::repeat_n(d, k as usize - 1)).collect();
            let elems: Vec<u64> = a.iter().map(|x| x as u64).collect();
            // every k-tuple (with repetition) of elements
            let mut idx = vec![0usize; k as usize];
            loop {
                let mut digit_sums = [0u64; 8];
                let mut total = 0u64;
                for (w, &i) in weights.iter().zip(&idx) {
                    total += w * elems[i];
                    for (pos, g) in digits(elems[i], base).into_iter().enumerate() {
                        digit_sums[pos] += w * g;
                    }
                }
                assert!(digit_sums.iter().all(|&s| s <= d - 1 + (k - 1) * d * (d - 1)));
                assert!(digit_sums.iter().all(|&s| s < base));
                let recombined: u64 = digit_sums.iter().rev().fold(0, |acc, &s| acc * base + s);
                assert_eq!(recombined, total);
                let mut p = 0;
                while p < idx.len() {
                    idx[p] += 1;
                    if idx[p] < elems.len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == idx.len() {
                    break;
                }
            }
        }
    }

    #[test]
    fn predicted_exponent_examples() {
        let e: f64 = predicted_exponent(2, 3);
        assert!((e - 0.278_942_945_651_129_9).abs() < 1e-12);
        let e: f64 = predicted_exponent(10, 3);
        assert!((e - 10f64.ln() / 300f64.ln()).abs() < 1e-15);
        assert!((e - 0.4037).abs() < 1e-4);
        let e: f64 = predicted_exponent(2, 2);
        assert!((e - 1.0 / 3.0).abs() < 1e-15);
        let e32: f32 = predicted_exponent(2, 2);
        assert!((e32 - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn greedy_examples() {
        let sidon: Equation = "1,1".parse().unwrap();
        let g = greedy_solution_free(7, &sidon, ScanOrder::Ascending).unwrap();
        assert_eq!(g.elements(), &[1, 2, 3, 5]);
        for eq in ["1,1", "1,2,2", "3,-5"] {
            let eq: Equation = eq.parse().unwrap();
            let g = greedy_solution_free(3, &eq, ScanOrder::Ascending).unwrap();
            assert_eq!(g.elements(), &[1, 2, 3]);
            let g = greedy_solution_free(1, &eq, ScanOrder::SeededShuffle(9)).unwrap();
            assert_eq!(g.elements(), &[1]);
        }
    }

    #[test]
    fn greedy_is_solution_free_and_maximal() {
        for eq in ["1,1", "1,1,1", "1,2", "2,-3"] {
            let eq: Equation = eq.parse().unwrap();
            for seed in 0..4 {
                let g = greedy_solution_free(14, &eq, ScanOrder::SeededShuffle(seed)).unwrap();
                assert!(is_solution_free(&g, &eq).unwrap());
                for x in 1..=14 {
                    if !g.contains(x) {
                        let bigger = g.with_element(x).unwrap();
                        assert!(!is_solution_free(&bigger, &eq).unwrap(), "{eq} {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn shuffle_is_seed_determined() {
        assert_eq!(scan_order(30, ScanOrder::SeededShuffle(5)), scan_order(30, ScanOrder::SeededShuffle(5)));
        assert_ne!(scan_order(30, ScanOrder::SeededShuffle(5)), scan_order(30, ScanOrder::SeededShuffle(6)));
    }
}
