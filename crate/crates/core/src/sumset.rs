//! Sumsets, difference sets, dilates, and concrete checks of the
//! classical sumset inequalities.
//!
//! Every inequality is compared in cross-multiplied integer form.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::counting::{energy, rep_of_terms};
use crate::error::{Error, Result};
use crate::model::FiniteSet;

/// Span limit below which sumsets are computed with bit vectors.
const BITSET_SPAN: i64 = 1 << 20;

/// Positive dilation factors `(s₁,…,s_l)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DilateSpec(Vec<u64>);

impl DilateSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Validation("dilate spec needs at least one factor".into()));
        }
        if factors.contains(&0) {
            return Err(Error::Validation("dilate factors must be positive".into()));
        }
        Ok(DilateSpec(factors))
    }

    pub fn factors(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `‖s‖₁`.
    pub fn norm1(&self) -> u64 {
        self.0.iter().sum()
    }
}

struct Bits {
    offset: i64,
    words: Vec<u64>,
}

impl Bits {
    fn from_set(set: &FiniteSet) -> Self {
        let offset = set.min().unwrap_or(0);
        let span = set.max().map_or(0, |m| (m - offset + 1) as usize);
        let mut words = vec![0u64; span.div_ceil(64)];
        for x in set.iter() {
            let i = (x - offset) as usize;
            words[i / 64] |= 1 << (i % 64);
        }
        Bits { offset, words }
    }

    fn to_set(&self) -> FiniteSet {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(self.offset + (wi * 64 + b) as i64);
                w &= w - 1;
            }
        }
        FiniteSet::from_sorted(out)
    }
}

/// `A + B = {a + b}`.
pub fn sumset(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    let (Some(amin), Some(amax), Some(bmin), Some(bmax)) = (a.min(), a.max(), b.min(), b.max())
    else {
        return FiniteSet::default();
    };
    // shift copies of the larger set, once per element of the smaller one
    let (big, small, small_min) = if a.len() >= b.len() { (a, b, bmin) } else { (b, a, amin) };
    let span = (amax - amin) + (bmax - bmin) + 1;
    if span <= BITSET_SPAN {
        let src = Bits::from_set(big);
        let mut dst = Bits {
            offset: amin + bmin,
            words: vec![0u64; (span as usize).div_ceil(64)],
        };
        for y in small.iter() {
            let shift = (y - small_min) as usize;
            let (q, r) = (shift / 64, shift % 64);
            for (i, &w) in src.words.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                dst.words[i + q] |= w << r;
                if r > 0 && i + q + 1 < dst.words.len() {
                    dst.words[i + q + 1] |= w >> (64 - r);
                }
            }
        }
        dst.to_set()
    } else {
        let mut v = Vec::with_capacity(a.len() * b.len());
        for x in a.iter() {
            for y in b.iter() {
                v.push(x + y);
            }
        }
        FiniteSet::new(v)
    }
}

/// `t·A = {t·a}` for any integer `t`.
pub fn scale(t: i64, a: &FiniteSet) -> FiniteSet {
    FiniteSet::new(a.iter().map(|x| t * x).collect())
}

/// `t·A` for a positive dilation factor.
pub fn dilate(t: u64, a: &FiniteSet) -> FiniteSet {
    let t = t as i64;
    FiniteSet::from_sorted(a.iter().map(|x| t * x).collect())
}

/// `A − B = {a − b}`.
pub fn difference(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    sumset(a, &scale(-1, b))
}

/// `kB = B + ⋯ + B` (`k` copies); `0B = {0}`.
pub fn iterated_sumset(k: u32, b: &FiniteSet) -> FiniteSet {
    if k == 0 {
        return FiniteSet::new(vec![0]);
    }
    // binary powering on the number of summands
    let mut result: Option<FiniteSet> = None;
    let mut base = b.clone();
    let mut k = k;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => sumset(&r, &base),
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = sumset(&base, &base);
    }
    result.unwrap()
}

/// `s₁·A + ⋯ + s_l·A`, folded left to right.
pub fn sum_of_dilates(spec: &DilateSpec, a: &FiniteSet) -> FiniteSet {
    spec.factors()
        .iter()
        .map(|&s| dilate(s, a))
        .reduce(|acc, d| sumset(&acc, &d))
        .unwrap_or_default()
}

/// `|A−C|·|B| ≤ |A−B|·|B−C|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleCheck {
    pub lhs: u128,
    pub rhs_numerator: u128,
    pub holds: bool,
}

pub fn ruzsa_triangle_check(a: &FiniteSet, b: &FiniteSet, c: &FiniteSet) -> Result<TriangleCheck> {
    if b.is_empty() {
        return Err(Error::Validation("B must be nonempty".into()));
    }
    let lhs = difference(a, c).len() as u128 * b.len() as u128;
    let rhs_numerator = difference(a, b).len() as u128 * difference(b, c).len() as u128;
    Ok(TriangleCheck {
        lhs,
        rhs_numerator,
        holds: lhs <= rhs_numerator,
    })
}

fn ratio_string<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// `|kB| ≤ K^k·|A|` with `K = |A+B|/|A|`, checked as
/// `|kB|·|A|^k ≤ |A+B|^k·|A|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlunneckeCheck {
    #[serde(rename = "K", serialize_with = "ratio_string")]
    pub doubling: Ratio<u64>,
    pub lhs: u128,
    pub bound: u128,
    pub holds: bool,
}

pub fn plunnecke_check(a: &FiniteSet, b: &FiniteSet, k: u32) -> Result<PlunneckeCheck> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Validation("A and B must be nonempty".into()));
    }
    let sum = sumset(a, b).len() as u128;
    let kb = iterated_sumset(k, b).len() as u128;
    let too_big = || Error::Range("Plünnecke bound overflows u128".into());
    let lhs = (a.len() as u128)
        .checked_pow(k)
        .and_then(|p| p.checked_mul(kb))
        .ok_or_else(too_big)?;
    let bound = sum
        .checked_pow(k)
        .and_then(|p| p.checked_mul(a.len() as u128))
        .ok_or_else(too_big)?;
    Ok(PlunneckeCheck {
        doubling: Ratio::new(sum as u64, a.len() as u64),
        lhs,
        bound,
        holds: lhs <= bound,
    })
}

/// `E·|Σ c_i·A_i| ≥ (Π|A_i|)²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyLowerCheck {
    #[serde(rename = "E")]
    pub energy: u128,
    pub product_sq: u128,
    pub sumset_size: u128,
    pub holds: bool,
}

pub fn cs_energy_lower_check(sets: &[(&FiniteSet, i64)]) -> Result<EnergyLowerCheck> {
    if sets.is_empty() {
        return Err(Error::Validation("empty system".into()));
    }
    let e = energy(sets, sets)?;
    let sumset_size = sets
        .iter()
        .map(|&(a, c)| scale(c, a))
        .reduce(|acc, d| sumset(&acc, &d))
        .unwrap()
        .len() as u128;
    let product: u128 = sets.iter().map(|(a, _)| a.len() as u128).product();
    let too_big = || Error::Range("energy bound overflows u128".into());
    let product_sq = product.checked_mul(product).ok_or_else(too_big)?;
    let lhs = e.checked_mul(sumset_size).ok_or_else(too_big)?;
    Ok(EnergyLowerCheck {
        energy: e,
        product_sq,
        sumset_size,
        holds: lhs >= product_sq,
    })
}

fn ratio128_string<S: Serializer>(r: &Ratio<u128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Normalized energies of two dilate systems over the same set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DilateEnergySurvey {
    pub n: usize,
    pub t: DilateSpec,
    pub s: DilateSpec,
    pub energy_t: u128,
    pub energy_s: u128,
    /// `E(t₁·A,…,t_k·A) / n^{2k−1}`.
    #[serde(serialize_with = "ratio128_string")]
    pub c_t: Ratio<u128>,
    /// `E(s₁·A,…,s_l·A) / n^{2l−1}`.
    #[serde(serialize_with = "ratio128_string")]
    pub c_s: Ratio<u128>,
}

fn normalized_energy(a: &FiniteSet, spec: &DilateSpec) -> Result<(u128, Ratio<u128>)> {
    let terms: Vec<_> = spec.factors().iter().map(|&t| (a, t as i64)).collect();
    let e = rep_of_terms(&terms)?.square_sum()?;
    let denom = (a.len() as u128)
        .checked_pow(2 * spec.len() as u32 - 1)
        .ok_or_else(|| Error::Range("normalizer overflows u128".into()))?;
    Ok((e, Ratio::new(e, denom)))
}

/// Data collection only: no relation between the two values is asserted.
pub fn dilate_energy_survey(
    a: &FiniteSet,
    t: &DilateSpec,
    s: &DilateSpec,
) -> Result<DilateEnergySurvey> {
    if a.is_empty() {
        return Err(Error::Validation("A must be nonempty".into()));
    }
    let (energy_t, c_t) = normalized_energy(a, t)?;
    let (energy_s, c_s) = normalized_energy(a, s)?;
    Ok(DilateEnergySurvey {
        n: a.len(),
        t: t.clone(),
        s: s.clone(),
        energy_t,
        energy_s,
        c_t,
        c_s,
    })
}

const DENSITIES: [f64; 3] = [0.1, 0.3, 0.6];

/// Nonempty random subset of `[1, span]`; each element kept with a
/// density drawn from a fixed menu.
pub fn random_set<R: Rng>(rng: &mut R, span: i64) -> FiniteSet {
    let density = DENSITIES[rng.gen_range(0..DENSITIES.len())];
    let mut v: Vec<i64> = (1..=span).filter(|_| rng.gen_bool(density)).collect();
    if v.is_empty() {
        v.push(rng.gen_range(1..=span));
    }
    FiniteSet::from_sorted(v)
}

/// Per-trial seed, derived from the batch seed and trial index.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub check: String,
    pub trial: u64,
    pub trial_seed: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckCounts {
    pub run: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalitySummary {
    pub trials: u64,
    pub seed: u64,
    pub failures: Vec<CheckFailure>,
    pub per_check_counts: BTreeMap<String, CheckCounts>,
}

impl InequalitySummary {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

fn fmt_set(a: &FiniteSet) -> String {
    format!("{:?}", a.elements())
}

/// Runs every inequality check once per trial on fresh random inputs:
/// the triangle inequality over `[1,50]`, Plünnecke with `k ≤ 4` over
/// `[1,40]`, the energy lower bound on dilate systems over `[1,30]`, and
/// the inclusion `s₁·A+⋯+s_l·A ⊆ ‖s‖₁A` over `[1,30]`.
pub fn run_inequality_trials(trials: u64, seed: u64) -> Result<InequalitySummary> {
    let mut failures = Vec::new();
    let mut counts: BTreeMap<String, CheckCounts> = BTreeMap::new();
    let mut record = |name: &str, trial: u64, ts: u64, ok: bool, detail: &dyn Fn() -> String| {
        let c = counts.entry(name.to_string()).or_default();
        c.run += 1;
        if !ok {
            c.failed += 1;
            failures.push(CheckFailure {
                check: name.to_string(),
                trial,
                trial_seed: ts,
                detail: detail(),
            });
        }
    };
    for trial in 0..trials {
        let ts = trial_seed(seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);

        let (a, b, c) = (random_set(&mut rng, 50), random_set(&mut rng, 50), random_set(&mut rng, 50));
        let tri = ruzsa_triangle_check(&a, &b, &c)?;
        record("ruzsa_triangle", trial, ts, tri.holds, &|| {
            format!("A={} B={} C={} {:?}", fmt_set(&a), fmt_set(&b), fmt_set(&c), tri)
        });

        let (a, b) = (random_set(&mut rng, 40), random_set(&mut rng, 40));
        let k = rng.gen_range(1..=4);
        let pl = plunnecke_check(&a, &b, k)?;
        record("plunnecke", trial, ts, pl.holds, &|| {
            format!("A={} B={} k={k} {:?}", fmt_set(&a), fmt_set(&b), pl)
        });

        let terms = rng.gen_range(1..=3);
        let system: Vec<(FiniteSet, i64)> = (0..terms)
            .map(|_| {
                let coeff = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
                (random_set(&mut rng, 30), coeff)
            })
            .collect();
        let borrowed: Vec<(&FiniteSet, i64)> = system.iter().map(|(s, c)| (s, *c)).collect();
        let cs = cs_energy_lower_check(&borrowed)?;
        record("cs_energy_lower", trial, ts, cs.holds, &|| {
            let sys: Vec<_> = system.iter().map(|(s, c)| format!("{c}*{}", fmt_set(s))).collect();
            format!("{} {:?}", sys.join(" + "), cs)
        });

        let a = random_set(&mut rng, 30);
        let len = rng.gen_range(1..=3);
        let spec = DilateSpec::new((0..len).map(|_| rng.gen_range(1..=3)).collect())?;
        let lhs = sum_of_dilates(&spec, &a);
        let rhs = iterated_sumset(spec.norm1() as u32, &a);
        record("dilate_inclusion", trial, ts, lhs.is_subset(&rhs), &|| {
            format!("A={} s={:?}", fmt_set(&a), spec.factors())
        });
    }
    Ok(InequalitySummary {
        trials,
        seed,
        failures,
        per_check_counts: counts,
    })
}
