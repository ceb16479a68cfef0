//! Brute-force oracles. Nothing here calls into the library's counting
//! or search code: every answer comes from direct enumeration.

#![allow(dead_code)]

/// Full coefficient vector `(a, −a)`.
pub fn full(a: &[i64]) -> Vec<i64> {
    a.iter().copied().chain(a.iter().map(|x| -x)).collect()
}

/// Every tuple in `values^len`, in odometer order.
pub fn tuples(values: &[i64], len: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if values.is_empty() {
        return out;
    }
    let mut idx = vec![0usize; len];
    loop {
        out.push(idx.iter().map(|&i| values[i]).collect());
        let mut p = 0;
        loop {
            if p == len {
                return out;
            }
            idx[p] += 1;
            if idx[p] < values.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

pub fn solves(coeffs: &[i64], xs: &[i64]) -> bool {
    coeffs.iter().zip(xs).map(|(c, x)| c * x).sum::<i64>() == 0
}

pub fn all_distinct(xs: &[i64]) -> bool {
    (0..xs.len()).all(|i| (i + 1..xs.len()).all(|j| xs[i] != xs[j]))
}

pub struct Counts {
    pub total: u128,
    pub distinct: u128,
    /// `coincident[i][j]` for 0-based `i < j`.
    pub coincident: Vec<Vec<u128>>,
}

/// One pass over all `|A|^{2k}` tuples.
pub fn brute_counts(set: &[i64], a: &[i64]) -> Counts {
    let f = full(a);
    let n = f.len();
    let mut c = Counts {
        total: 0,
        distinct: 0,
        coincident: vec![vec![0; n]; n],
    };
    for t in tuples(set, n) {
        if !solves(&f, &t) {
            continue;
        }
        c.total += 1;
        if all_distinct(&t) {
            c.distinct += 1;
        }
        for i in 0..n {
            for j in i + 1..n {
                if t[i] == t[j] {
                    c.coincident[i][j] += 1;
                }
            }
        }
    }
    c
}

pub fn permutations(v: &[i64]) -> Vec<Vec<i64>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

pub fn combinations(values: &[i64], r: usize) -> Vec<Vec<i64>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..values.len() {
        for mut rest in combinations(&values[i + 1..], r - 1) {
            rest.insert(0, values[i]);
            out.push(rest);
        }
    }
    out
}

/// `2k`-subsets of `[1, N]` admitting a solving ordering.
pub fn brute_edges(n: i64, a: &[i64]) -> Vec<Vec<i64>> {
    let f = full(a);
    let values: Vec<i64> = (1..=n).collect();
    combinations(&values, f.len())
        .into_iter()
        .filter(|s| permutations(s).iter().any(|p| solves(&f, p)))
        .collect()
}

/// Largest subset of `[1, N]` containing no edge, by scanning all `2^N`
/// subsets.
pub fn brute_max_free(n: i64, a: &[i64]) -> usize {
    let masks: Vec<u64> = brute_edges(n, a)
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &x| m | 1 << (x - 1)))
        .collect();
    (0u64..1 << n)
        .filter(|s| masks.iter().all(|e| s & e != *e))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

/// All subsets of `[1, n]` with at most `max_size` elements.
pub fn small_subsets(n: i64, max_size: usize) -> Vec<Vec<i64>> {
    let values: Vec<i64> = (1..=n).collect();
    (1..=max_size).flat_map(|r| combinations(&values, r)).collect()
}
