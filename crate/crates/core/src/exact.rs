//! Exact big-integer arithmetic for the quantities that live over the rationals:
//! the decomposition `3^k = m·2^k + R`, the carry condition, `g(k)`, jump indices
//! and the `m + R ≤ 2^k − 2` bound.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("{what} must be at least {min}, got {got}")]
    BelowDomain {
        what: &'static str,
        min: u64,
        got: u64,
    },
    #[error("empty range [{lo}, {hi}]")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("table of {needed} bytes exceeds the memory budget of {budget} bytes")]
    MemoryBudget { needed: u64, budget: u64 },
}

fn require(what: &'static str, min: u64, got: u64) -> Result<(), ExactError> {
    if got < min {
        Err(ExactError::BelowDomain { what, min, got })
    } else {
        Ok(())
    }
}

fn require_range(lo: u64, hi: u64) -> Result<(), ExactError> {
    if lo > hi {
        Err(ExactError::EmptyRange { lo, hi })
    } else {
        Ok(())
    }
}

/// `3^k = m·2^k + R` with `0 ≤ R < 2^k`, so `m = ⌊(3/2)^k⌋` and `R/2^k = {(3/2)^k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerWitness {
    pub k: u64,
    pub pow3: BigUint,
    pub pow2: BigUint,
    pub m: BigUint,
    pub r: BigUint,
}

impl PowerWitness {
    /// `R/2^k` as an `f64`, for display only.
    pub fn fractional_part_f64(&self) -> f64 {
        ratio_pow2_f64(&BigInt::from(self.r.clone()), self.k)
    }
}

pub fn power_witness(k: u64) -> Result<PowerWitness, ExactError> {
    require("k", 1, k)?;
    let exp = u32::try_from(k).expect("exponent fits in u32");
    let pow3 = BigUint::from(3u32).pow(exp);
    let pow2 = BigUint::one() << k;
    let m = &pow3 >> k;
    let r = &pow3 - (&m << k);
    Ok(PowerWitness {
        k,
        pow3,
        pow2,
        m,
        r,
    })
}

/// Walks `(m, R)` from `k` to `k + 1` without recomputing powers.
///
/// With `3m = 2a + e`, `3^{k+1} = a·2^{k+1} + (e·2^k + 3R)` and the bracketed term
/// is below `2^{k+2}`, so the new quotient picks up at most a single carry.
#[derive(Debug, Clone)]
pub struct WitnessWalker {
    k: u64,
    m: BigUint,
    r: BigUint,
}

impl WitnessWalker {
    pub fn new(k: u64) -> Result<Self, ExactError> {
        let w = power_witness(k)?;
        Ok(Self {
            k: w.k,
            m: w.m,
            r: w.r,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn r(&self) -> &BigUint {
        &self.r
    }

    pub fn advance(&mut self) {
        let k = self.k;
        self.r *= 3u32;
        self.m *= 3u32;
        if self.m.bit(0) {
            self.r += BigUint::one() << k;
        }
        self.m >>= 1u32;
        if self.r.bit(k + 1) {
            self.r.set_bit(k + 1, false);
            self.m += 1u32;
        }
        self.k += 1;
    }

    /// Full witness at the current index; `pow3` is rebuilt as `m·2^k + R`.
    pub fn witness(&self) -> PowerWitness {
        let pow2 = BigUint::one() << self.k;
        let pow3 = (&self.m << self.k) + &self.r;
        PowerWitness {
            k: self.k,
            pow3,
            pow2,
            m: self.m.clone(),
            r: self.r.clone(),
        }
    }

    /// `2^k − m − R`.
    pub fn slack(&self) -> BigInt {
        let pow2 = BigInt::one() << self.k;
        pow2 - BigInt::from(&self.m + &self.r)
    }
}

/// Left and right sides of `2^k{(3/2)^k} + ⌊(3/2)^k⌋ > 2^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarryVerdict {
    pub k: u64,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
    pub slack: BigInt,
}

fn verdict_from(w: &PowerWitness) -> CarryVerdict {
    let lhs = &w.r + &w.m;
    let rhs = w.pow2.clone();
    let slack = BigInt::from(rhs.clone()) - BigInt::from(lhs.clone());
    CarryVerdict {
        k: w.k,
        holds: lhs > rhs,
        lhs,
        rhs,
        slack,
    }
}

pub fn carry_holds(k: u64) -> Result<CarryVerdict, ExactError> {
    Ok(verdict_from(&power_witness(k)?))
}

/// One scanned index. The slack itself has `k` bits, so rows only carry its
/// sign, bit length and the normalised value `slack / 2^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarryRow {
    pub k: u64,
    pub holds: bool,
    pub slack_sign: i8,
    pub slack_bits: u64,
    pub relative_slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CarryScanReport {
    pub k_min: u64,
    pub k_max: u64,
    pub violations: Vec<u64>,
    pub min_slack: BigInt,
    pub min_slack_k: u64,
    pub min_relative_slack: f64,
    pub min_relative_slack_k: u64,
    pub rows: Vec<CarryRow>,
}

/// `x / 2^k` as `f64` without overflowing on huge `x`.
pub fn ratio_pow2_f64(x: &BigInt, k: u64) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        let v = x.to_f64().unwrap_or(0.0);
        return v * 2f64.powi(-(k.min(2000) as i32));
    }
    let drop = bits - 64;
    let top = (x >> drop).to_f64().unwrap_or(0.0);
    let e = drop as i64 - k as i64;
    top * 2f64.powi(e.clamp(-2000, 2000) as i32)
}

fn row_from_slack(k: u64, slack: &BigInt) -> CarryRow {
    let slack_sign = match slack.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    };
    CarryRow {
        k,
        holds: slack_sign < 0,
        slack_sign,
        slack_bits: slack.bits(),
        relative_slack: ratio_pow2_f64(slack, k),
    }
}

struct ScanAccumulator {
    violations: Vec<u64>,
    min: Option<(BigInt, u64)>,
    min_rel: Option<(f64, u64)>,
    rows: Vec<CarryRow>,
}

impl ScanAccumulator {
    fn new() -> Self {
        Self {
            violations: Vec::new(),
            min: None,
            min_rel: None,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, k: u64, slack: BigInt) {
        let row = row_from_slack(k, &slack);
        if row.holds {
            self.violations.push(k);
        }
        if self
            .min_rel
            .as_ref()
            .is_none_or(|(v, _)| row.relative_slack < *v)
        {
            self.min_rel = Some((row.relative_slack, k));
        }
        if self.min.as_ref().is_none_or(|(v, _)| slack < *v) {
            self.min = Some((slack, k));
        }
        self.rows.push(row);
    }

    fn merge(mut self, other: ScanAccumulator) -> Self {
        self.violations.extend(other.violations);
        self.rows.extend(other.rows);
        if let Some((v, k)) = other.min {
            if self.min.as_ref().is_none_or(|(cur, _)| v < *cur) {
                self.min = Some((v, k));
            }
        }
        if let Some((v, k)) = other.min_rel {
            if self.min_rel.as_ref().is_none_or(|(cur, _)| v < *cur) {
                self.min_rel = Some((v, k));
            }
        }
        self
    }

    fn finish(self, k_min: u64, k_max: u64) -> CarryScanReport {
        let (min_slack, min_slack_k) = self.min.expect("nonempty range");
        let (min_relative_slack, min_relative_slack_k) = self.min_rel.expect("nonempty range");
        CarryScanReport {
            k_min,
            k_max,
            violations: self.violations,
            min_slack,
            min_slack_k,
            min_relative_slack,
            min_relative_slack_k,
            rows: self.rows,
        }
    }
}

fn scan_segment(k_min: u64, k_max: u64) -> ScanAccumulator {
    let mut acc = ScanAccumulator::new();
    let mut walker = WitnessWalker::new(k_min).expect("k_min validated");
    loop {
        acc.push(walker.k(), walker.slack());
        if walker.k() == k_max {
            break;
        }
        walker.advance();
    }
    acc
}

/// Sequential scan of the carry condition over `[k_min, k_max]`.
pub fn scan_carry(k_min: u64, k_max: u64) -> Result<CarryScanReport, ExactError> {
    require("k_min", 1, k_min)?;
    require_range(k_min, k_max)?;
    Ok(scan_segment(k_min, k_max).finish(k_min, k_max))
}

/// Same report as [`scan_carry`], computed over `chunks` independent sub-ranges.
/// Each sub-range seeds its walker from a directly computed witness.
pub fn scan_carry_parallel(
    k_min: u64,
    k_max: u64,
    chunks: usize,
) -> Result<CarryScanReport, ExactError> {
    require("k_min", 1, k_min)?;
    require_range(k_min, k_max)?;
    let len = k_max - k_min + 1;
    let chunks = (chunks.max(1) as u64).min(len);
    let step = len.div_ceil(chunks);
    let bounds: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (k_min + c * step, (k_min + (c + 1) * step - 1).min(k_max)))
        .filter(|(lo, hi)| lo <= hi)
        .collect();
    let parts: Vec<ScanAccumulator> = bounds
        .par_iter()
        .map(|&(lo, hi)| scan_segment(lo, hi))
        .collect();
    let merged = parts
        .into_iter()
        .fold(ScanAccumulator::new(), ScanAccumulator::merge);
    Ok(merged.finish(k_min, k_max))
}

/// `m + R ≤ 2^i − 2`, claimed for `i ≥ 3`.
pub fn mr_slack_check(i: u64) -> Result<bool, ExactError> {
    require("i", 3, i)?;
    let w = power_witness(i)?;
    Ok(mr_bound_from(&w.m, &w.r, i))
}

pub(crate) fn mr_bound_from(m: &BigUint, r: &BigUint, i: u64) -> bool {
    let lhs = m + r + 2u32;
    lhs <= (BigUint::one() << i)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkValue {
    pub k: u64,
    pub g: BigUint,
}

/// `g(k) = 2^k + ⌊(3/2)^k⌋ − 2`.
pub fn g_of_k(k: u64) -> Result<GkValue, ExactError> {
    let w = power_witness(k)?;
    Ok(GkValue {
        k,
        g: w.pow2 + w.m - 2u32,
    })
}

/// The minus-sign variant `2^k − ⌊(3/2)^k⌋ − 2`, kept only so reports can show
/// how it disagrees with the known values of `g`.
pub fn g_minus_variant(k: u64) -> Result<BigInt, ExactError> {
    let w = power_witness(k)?;
    Ok(BigInt::from(w.pow2) - BigInt::from(w.m) - 2)
}

pub const DEFAULT_TABLE_BUDGET: u64 = 256 << 20;

/// Smallest `s` such that every integer in `[1, limit]` is a sum of at most `s`
/// positive `k`-th powers.
///
/// This is only a lower bound for `g(k)` in general; it equals `g(k)` once
/// `limit` covers the hardest integer (7 for squares, 23 for cubes).
pub fn brute_force_g(k: u32, limit: u64, budget_bytes: u64) -> Result<u32, ExactError> {
    require("k", 1, k as u64)?;
    require("limit", 1, limit)?;
    let needed = (limit + 1).saturating_mul(std::mem::size_of::<u32>() as u64);
    if needed > budget_bytes {
        return Err(ExactError::MemoryBudget {
            needed,
            budget: budget_bytes,
        });
    }
    let limit = limit as usize;
    let powers: Vec<usize> = (1u64..)
        .map_while(|b| b.checked_pow(k).filter(|p| *p as usize <= limit))
        .map(|p| p as usize)
        .collect();
    let mut table = vec![u32::MAX; limit + 1];
    table[0] = 0;
    for n in 1..=limit {
        let best = powers
            .iter()
            .take_while(|&&p| p <= n)
            .map(|&p| table[n - p])
            .min()
            .expect("1 is always a k-th power");
        table[n] = best + 1;
    }
    Ok(table[1..].iter().copied().max().unwrap_or(0))
}

/// `(i, ℓ_i)` with `ℓ_i = ⌊(3/2)^i⌋` for `i = 1..=i_max`.
pub fn jump_indices(i_max: u64) -> Result<Vec<(u64, BigUint)>, ExactError> {
    require("i_max", 1, i_max)?;
    let mut walker = WitnessWalker::new(1)?;
    let mut out = Vec::with_capacity(i_max as usize);
    loop {
        out.push((walker.k(), walker.m().clone()));
        if walker.k() == i_max {
            break;
        }
        walker.advance();
    }
    Ok(out)
}

/// Applies `f` to every witness in `[lo, hi]` in index order.
pub fn for_each_witness<F>(lo: u64, hi: u64, mut f: F) -> Result<(), ExactError>
where
    F: FnMut(&WitnessWalker),
{
    require("lo", 1, lo)?;
    require_range(lo, hi)?;
    let mut walker = WitnessWalker::new(lo)?;
    loop {
        f(&walker);
        if walker.k() == hi {
            return Ok(());
        }
        walker.advance();
    }
}

/// True iff `n` is `3^s` for some `s ≥ 0`.
pub fn is_power_of_three(n: &BigUint) -> bool {
    if n.is_zero() {
        return false;
    }
    let three = BigUint::from(3u32);
    let mut x = n.clone();
    while (&x % &three).is_zero() {
        x /= &three;
    }
    x.is_one()
}
