//! Range-checked verifiers for the individual inequalities of the argument.
//!
//! Index lemmas that reduce to integer comparisons (`lemma1`, `upper_endpoint`,
//! `mr_bound`) are checked exactly and never come back inconclusive. The rest
//! run on certified intervals; continuous claims are checked on deterministic
//! samples drawn from a seeded ChaCha stream plus fixed boundary points.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{self, ExactError};
use crate::real::{
    certify_sign, exp_interval, finish, iv_pow, ln_interval, ln_point, sign_of, Constants, Dyadic,
    Interval, Ladder, RealError, SignValue, GUARD_BITS,
};
use crate::segments::{self, SegmentError};
use crate::verdict::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    Lemma1,
    CeilTransfer,
    BasicBound,
    BinomialQ,
    UpperEndpoint,
    LowerEndpoint,
    MrBound,
    XPrimePositive,
    HIncreasing,
}

impl LemmaId {
    pub const ALL: [LemmaId; 9] = [
        LemmaId::Lemma1,
        LemmaId::CeilTransfer,
        LemmaId::BasicBound,
        LemmaId::BinomialQ,
        LemmaId::UpperEndpoint,
        LemmaId::LowerEndpoint,
        LemmaId::MrBound,
        LemmaId::XPrimePositive,
        LemmaId::HIncreasing,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::Lemma1 => "lemma1",
            LemmaId::CeilTransfer => "ceil_transfer",
            LemmaId::BasicBound => "basic_bound",
            LemmaId::BinomialQ => "binomial_q",
            LemmaId::UpperEndpoint => "upper_endpoint",
            LemmaId::LowerEndpoint => "lower_endpoint",
            LemmaId::MrBound => "mr_bound",
            LemmaId::XPrimePositive => "x_prime_positive",
            LemmaId::HIncreasing => "h_increasing",
        }
    }

    /// Smallest index the lemma is stated for; `None` for sampled claims.
    pub fn min_index(self) -> Option<u64> {
        match self {
            LemmaId::MrBound => Some(3),
            LemmaId::BinomialQ | LemmaId::XPrimePositive | LemmaId::HIncreasing => None,
            _ => Some(2),
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(
            self,
            LemmaId::Lemma1 | LemmaId::UpperEndpoint | LemmaId::MrBound
        )
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LemmaId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LemmaId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown lemma `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("{lemma} is stated for indices ≥ {min}, range starts at {got}")]
    Domain { lemma: LemmaId, min: u64, got: u64 },
    #[error("empty range [{lo}, {hi}]")]
    EmptyRange { lo: u64, hi: u64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Real(#[from] RealError),
}

fn check_range(lemma: LemmaId, lo: u64, hi: u64) -> Result<(), LemmaError> {
    if let Some(min) = lemma.min_index() {
        if lo < min {
            return Err(LemmaError::Domain {
                lemma,
                min,
                got: lo,
            });
        }
    }
    if lo > hi {
        return Err(LemmaError::EmptyRange { lo, hi });
    }
    Ok(())
}

/// Input at which a check failed or could not be decided.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Index(u64),
    Point(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma_id: LemmaId,
    pub range: (u64, u64),
    pub checked: u64,
    pub passes: u64,
    /// Passes that are identities rather than strict inequalities.
    pub equalities: u64,
    pub failures: Vec<Witness>,
    pub inconclusive: Vec<Witness>,
}

impl LemmaReport {
    fn new(lemma_id: LemmaId, range: (u64, u64)) -> Self {
        LemmaReport {
            lemma_id,
            range,
            checked: 0,
            passes: 0,
            equalities: 0,
            failures: Vec::new(),
            inconclusive: Vec::new(),
        }
    }

    fn record(&mut self, verdict: Verdict, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        match verdict {
            Verdict::Pass => self.passes += 1,
            Verdict::Fail => self.failures.push(witness()),
            Verdict::Inconclusive => self.inconclusive.push(witness()),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.inconclusive.is_empty()
    }
}

const CHUNK: u64 = 512;

/// Runs `f(i, m, R)` over `[lo, hi]` in parallel, walking witnesses chunk by chunk
/// so memory stays bounded. Results come back in index order.
fn par_witnesses<T, F>(lo: u64, hi: u64, f: F) -> Result<Vec<T>, LemmaError>
where
    T: Send,
    F: Fn(u64, &BigUint, &BigUint) -> T + Sync,
{
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    let mut walker = exact::WitnessWalker::new(lo)?;
    let mut chunk_lo = lo;
    while chunk_lo <= hi {
        let chunk_hi = (chunk_lo + CHUNK - 1).min(hi);
        let mut batch = Vec::with_capacity((chunk_hi - chunk_lo + 1) as usize);
        loop {
            batch.push((walker.k(), walker.m().clone(), walker.r().clone()));
            if walker.k() == chunk_hi {
                break;
            }
            walker.advance();
        }
        out.par_extend(batch.par_iter().map(|(i, m, r)| f(*i, m, r)));
        if chunk_hi == hi {
            break;
        }
        walker.advance();
        chunk_lo = chunk_hi + 1;
    }
    Ok(out)
}

/// `⌊ln(⌊(3/2)^n⌋ + 1)/b⌋ = n`, checked as `3^n < (m+1)·2^n` and `(m+1)·2^{n+1} < 3^{n+1}`.
pub fn verify_lemma1(lo: u64, hi: u64) -> Result<LemmaReport, LemmaError> {
    check_range(LemmaId::Lemma1, lo, hi)?;
    let verdicts = par_witnesses(lo, hi, |n, m, r| {
        let pow3 = (m << n) + r;
        let m1 = m + 1u32;
        let lower = pow3 < (&m1 << n);
        let upper = (&m1 << (n + 1)) < pow3 * 3u32;
        Verdict::from_bool(lower && upper)
    })?;
    let mut rep = LemmaReport::new(LemmaId::Lemma1, (lo, hi));
    for (n, v) in (lo..=hi).zip(verdicts) {
        rep.record(v, || Witness::Index(n));
    }
    Ok(rep)
}

/// `ln(⌊(3/2)^i⌋ + 1)/b < i + 1`, checked as `(m+1)·2^{i+1} < 3^{i+1}`.
pub fn verify_upper_endpoint(lo: u64, hi: u64) -> Result<LemmaReport, LemmaError> {
    check_range(LemmaId::UpperEndpoint, lo, hi)?;
    let verdicts = par_witnesses(lo, hi, |i, m, r| {
        let pow3_next = ((m << i) + r) * 3u32;
        Verdict::from_bool(((m + 1u32) << (i + 1)) < pow3_next)
    })?;
    let mut rep = LemmaReport::new(LemmaId::UpperEndpoint, (lo, hi));
    for (i, v) in (lo..=hi).zip(verdicts) {
        rep.record(v, || Witness::Index(i));
    }
    Ok(rep)
}

/// Why `m + R = 2^i − 1` cannot happen: it would force `3^i = (2^i − 1)(m + 1)`,
/// impossible for even `i` because `2^i − 1` is not a power of 3, and for odd `i`
/// because `3 ∤ 2^i − 1` would put all of `3^i` into `m + 1 < 3^i`.
fn factorization_excluded(i: u64, m: &BigUint, r: &BigUint) -> bool {
    let pow2_minus_1 = (BigUint::one() << i) - 1u32;
    if i.is_multiple_of(2) {
        !exact::is_power_of_three(&pow2_minus_1)
    } else {
        // 2^i ≡ 2 (mod 3) for odd i; bits(m + 1) ≤ bits(m) + 1 < bits(3^i) = bits(m) + i
        let residue_one = (&pow2_minus_1 % 3u32).is_one();
        let pow3_bits = m.bits() + i - u64::from(r.is_zero() && m.is_zero());
        residue_one && (m + 1u32).bits() < pow3_bits
    }
}

/// `m + R ≤ 2^i − 2` for `i ≥ 3`, together with the two excluded cases from its proof:
/// `m + R ≠ 2^i` and `3^i ≠ (2^i − 1)(m + 1)`.
///
/// `invert` flips the main comparison. It exists so the violation path can be exercised.
pub fn verify_mr_bound(lo: u64, hi: u64, invert: bool) -> Result<LemmaReport, LemmaError> {
    check_range(LemmaId::MrBound, lo, hi)?;
    let verdicts = par_witnesses(lo, hi, |i, m, r| {
        let bound = exact::mr_bound_from(m, r, i);
        let bound = if invert { !bound } else { bound };
        let sum = m + r;
        let pow2 = BigUint::one() << i;
        let not_pow2 = sum != pow2;
        let pow3 = (m << i) + r;
        let m1 = m + 1u32;
        let identity_false = pow3 != (&m1 << i) - &m1;
        let excluded = factorization_excluded(i, m, r);
        Verdict::from_bool(bound && not_pow2 && identity_false && excluded)
    })?;
    let mut rep = LemmaReport::new(LemmaId::MrBound, (lo, hi));
    for (i, v) in (lo..=hi).zip(verdicts) {
        rep.record(v, || Witness::Index(i));
    }
    Ok(rep)
}

/// `m^{1−q}` for a big integer `m ≥ 1`.
fn m_pow_one_minus_q(m: &BigUint, wp: u32) -> Result<Interval, RealError> {
    let c = Constants::at(wp);
    let ln_m = ln_point(&Dyadic::from_int(m.clone()), wp)?;
    let e = Interval::from_int(1, wp).sub(&c.q);
    exp_interval(&e.mul(&ln_m), wp)
}

/// `1 − r > m^{1−q}` with `r = R/2^i` exact, i.e. `ℓ_i + 1 − ℓ_i^{1−q} > (3/2)^i`.
pub fn lower_endpoint_at(i: u64, m: &BigUint, r: &BigUint, bits: u32) -> Verdict {
    let one_minus_r = Dyadic::new(BigInt::from((BigUint::one() << i) - r), -(i as i64));
    for p in Ladder::from_bits(bits).rungs() {
        let Ok(delta) = m_pow_one_minus_q(m, p + GUARD_BITS) else {
            return Verdict::Inconclusive;
        };
        if delta.hi() < &one_minus_r {
            return Verdict::Pass;
        }
        if delta.lo() >= &one_minus_r {
            return Verdict::Fail;
        }
    }
    Verdict::Inconclusive
}

/// Same claim in logarithmic form, `ln(m + 1 − m^{1−q})/b > i`. This needs about
/// `bits(m)` extra bits since the margin shrinks like `1/m`.
pub fn lower_endpoint_log_form(i: u64, m: &BigUint, bits: u32) -> Verdict {
    let start = bits + GUARD_BITS + m.bits() as u32;
    let target = Dyadic::from(i);
    for p in Ladder::new(start, start * 4).rungs() {
        let eval = || -> Result<Interval, RealError> {
            let c = Constants::at(p);
            let delta = m_pow_one_minus_q(m, p)?;
            let arg = Interval::point(Dyadic::from_int(m + 1u32), p).sub(&delta);
            ln_interval(&arg, p)?.div(&c.b)
        };
        let Ok(v) = eval() else {
            return Verdict::Inconclusive;
        };
        if v.lo() > &target {
            return Verdict::Pass;
        }
        if v.hi() <= &target {
            return Verdict::Fail;
        }
    }
    Verdict::Inconclusive
}

pub fn verify_lower_endpoint(lo: u64, hi: u64, bits: u32) -> Result<LemmaReport, LemmaError> {
    check_range(LemmaId::LowerEndpoint, lo, hi)?;
    let verdicts = par_witnesses(lo, hi, |i, m, r| lower_endpoint_at(i, m, r, bits))?;
    let mut rep = LemmaReport::new(LemmaId::LowerEndpoint, (lo, hi));
    for (i, v) in (lo..=hi).zip(verdicts) {
        rep.record(v, || Witness::Index(i));
    }
    Ok(rep)
}

pub fn verify_basic_bound(lo: u64, hi: u64, bits: u32) -> Result<LemmaReport, LemmaError> {
    check_range(LemmaId::BasicBound, lo, hi)?;
    let verdicts: Vec<Verdict> = (lo..=hi)
        .into_par_iter()
        .map(|n| segments::basic_bound_holds(n, bits).unwrap_or(Verdict::Inconclusive))
        .collect();
    let mut rep = LemmaReport::new(LemmaId::BasicBound, (lo, hi));
    for (n, v) in (lo..=hi).zip(verdicts) {
        rep.record(v, || Witness::Index(n));
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CeilTransferError {
    #[error("hypothesis n < alpha < n + 1 fails or is not certified")]
    AlphaOutsideBracket,
    #[error("hypothesis ln(alpha)/b > floor(ln(n+1)/b) fails")]
    HypothesisFails,
    #[error("could not certify at {bits} bits")]
    Inconclusive { bits: u32 },
    #[error(transparent)]
    Real(#[from] RealError),
}

/// Given `n < α < n + 1` and `ln(α)/b > ⌊ln(n+1)/b⌋`, certifies
/// `⌈ln(α)/b⌉ = ⌈ln(n+1)/b⌉`. `Ok(false)` is a genuine counterexample; a failed
/// hypothesis is reported as an error instead.
pub fn verify_ceil_transfer(
    alpha: &Interval,
    n: u64,
    bits: u32,
) -> Result<bool, CeilTransferError> {
    if !(alpha.lo() > &Dyadic::from(n) && alpha.hi() < &Dyadic::from(n + 1)) {
        return Err(CeilTransferError::AlphaOutsideBracket);
    }
    let ladder = Ladder::from_bits(bits);
    for p in ladder.rungs() {
        let wp = p + GUARD_BITS;
        let c = Constants::at(wp);
        let la = ln_interval(alpha, wp)?.div(&c.b)?;
        let lu = ln_point(&Dyadic::from(n + 1), wp)?.div(&c.b)?;
        let Some(z) = lu.strict_floor() else { continue };
        let zd = Dyadic::from_int(z.clone());
        if la.hi() <= &zd {
            return Err(CeilTransferError::HypothesisFails);
        }
        if la.lo() <= &zd {
            continue;
        }
        let ceil_u = &z + 1;
        let lo_ceil = la.lo().ceil();
        let hi_ceil = la.hi().ceil();
        if lo_ceil == hi_ceil {
            return Ok(lo_ceil == ceil_u);
        }
    }
    Err(CeilTransferError::Inconclusive { bits: ladder.max })
}

/// `verify_ceil_transfer` with `α = t_n` over a range of `n`. A failed
/// hypothesis here means `l_n ≤ z_n`, which is itself a counterexample.
pub fn verify_ceil_transfer_range(lo: u64, hi: u64, bits: u32) -> Result<LemmaReport, LemmaError> {
    check_range(LemmaId::CeilTransfer, lo, hi)?;
    let verdicts: Vec<Verdict> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let Ok(t) = segments::solve_t_n(n, bits) else {
                return Verdict::Inconclusive;
            };
            match verify_ceil_transfer(&t, n, bits) {
                Ok(ok) => Verdict::from_bool(ok),
                Err(CeilTransferError::HypothesisFails) => Verdict::Fail,
                Err(_) => Verdict::Inconclusive,
            }
        })
        .collect();
    let mut rep = LemmaReport::new(LemmaId::CeilTransfer, (lo, hi));
    for (n, v) in (lo..=hi).zip(verdicts) {
        rep.record(v, || Witness::Index(n));
    }
    Ok(rep)
}

/// Deterministic sample set: `count` points from a seeded stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleSpec {
    pub count: u64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(count: u64, seed: u64) -> Self {
        SampleSpec { count, seed }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo_exp: f64, hi_exp: f64) -> f64 {
    2f64.powf(rng.gen_range(lo_exp..hi_exp))
}

#[derive(Debug, Clone)]
pub struct BinomialSample {
    pub a: Interval,
    pub b: Interval,
}

impl BinomialSample {
    fn points(a: f64, b: f64, bits: u32) -> Self {
        BinomialSample {
            a: Interval::from_f64(a, bits).expect("finite sample"),
            b: Interval::from_f64(b, bits).expect("finite sample"),
        }
    }

    fn witness(&self) -> Witness {
        Witness::Point(vec![self.a.mid_f64(), self.b.mid_f64()])
    }
}

/// Boundary cases, the `a = m, b = 1 − m^{1−q}` instances used in the endpoint
/// argument, then seeded random pairs up to `sample.count` in total.
pub fn binomial_samples(sample: SampleSpec, bits: u32) -> Vec<BinomialSample> {
    let mut out = vec![
        BinomialSample::points(0.0, 0.0, bits),
        BinomialSample::points(1.0, 0.0, bits),
        BinomialSample::points(0.0, 1.0, bits),
        BinomialSample::points(1.0, 1.0, bits),
        BinomialSample::points(2.0, 3.0, bits),
        BinomialSample::points(1e-6, 1e6, bits),
        BinomialSample::points(1e6, 1e-6, bits),
    ];
    for m in 2u64..=20 {
        let wp = bits + GUARD_BITS;
        let delta = m_pow_one_minus_q(&BigUint::from(m), wp).expect("m ≥ 2");
        out.push(BinomialSample {
            a: Interval::from_int(m, bits),
            b: Interval::from_int(1, wp).sub(&delta).rounded(bits),
        });
    }
    let mut rng = sample.rng(0xb1_4e);
    while (out.len() as u64) < sample.count {
        let (a, b) = if rng.gen_bool(0.5) {
            (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))
        } else {
            (
                log_uniform(&mut rng, -20.0, 20.0),
                log_uniform(&mut rng, -20.0, 20.0),
            )
        };
        out.push(BinomialSample::points(a, b, bits));
    }
    out.truncate(sample.count as usize);
    out
}

/// `(a+b)^q ≤ a^q + q·a^{q−1}·b + b^q` at one sample. `None` signals an identity
/// (`a = 0` or `b = 0`), which is recorded as an equality.
pub fn binomial_q_at(s: &BinomialSample, bits: u32) -> Result<Option<Verdict>, RealError> {
    let zero = Dyadic::zero();
    if (s.a.is_point() && s.a.lo() == &zero) || (s.b.is_point() && s.b.lo() == &zero) {
        return Ok(None);
    }
    let ladder = Ladder::from_bits(bits);
    let sign = certify_sign(
        |p| {
            let c = Constants::at(p + GUARD_BITS);
            let one = Interval::from_int(1, p);
            let a = s.a.clone().with_bits(p);
            let b = s.b.clone().with_bits(p);
            let lhs = iv_pow(&a.add(&b), &c.q, p)?;
            let aq = iv_pow(&a, &c.q, p)?;
            let aq1 = iv_pow(&a, &c.q.sub(&one), p)?;
            let bq = iv_pow(&b, &c.q, p)?;
            let rhs = aq.add(&c.q.mul(&aq1).mul(&b)).add(&bq);
            Ok::<_, RealError>(rhs.sub(&lhs))
        },
        ladder.start,
        ladder.max,
    )?;
    Ok(Some(match sign.value {
        SignValue::Positive => Verdict::Pass,
        SignValue::Negative => Verdict::Fail,
        SignValue::ZeroOrUncertain => Verdict::Inconclusive,
    }))
}

pub fn verify_binomial_q(sample: SampleSpec, bits: u32) -> Result<LemmaReport, LemmaError> {
    let samples = binomial_samples(sample, bits);
    let verdicts: Vec<Option<Verdict>> = samples
        .par_iter()
        .map(|s| binomial_q_at(s, bits).unwrap_or(Some(Verdict::Inconclusive)))
        .collect();
    let mut rep = LemmaReport::new(LemmaId::BinomialQ, (0, sample.count));
    for (s, v) in samples.iter().zip(verdicts) {
        match v {
            None => {
                rep.checked += 1;
                rep.passes += 1;
                rep.equalities += 1;
            }
            Some(v) => rep.record(v, || s.witness()),
        }
    }
    Ok(rep)
}

/// `H(x) = x + 1 − ln((3/2)^x + 1)/b`.
pub fn h_gap(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    let wp = bits + GUARD_BITS + x.mag().msb().max(0) as u32;
    let c = Constants::at(wp);
    let pow = exp_interval(&x.mul(&c.b), wp)?;
    let one = Interval::from_int(1, wp);
    let f = ln_interval(&pow.add(&one), wp)?.div(&c.b)?;
    Ok(finish(x.add(&one).sub(&f), bits))
}

/// `H'(x) = 1/((3/2)^x + 1)`.
pub fn h_gap_derivative(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    let wp = bits + GUARD_BITS + x.mag().msb().max(0) as u32;
    let c = Constants::at(wp);
    let pow = exp_interval(&x.mul(&c.b), wp)?;
    let one = Interval::from_int(1, wp);
    Ok(finish(one.div(&pow.add(&one))?, bits))
}

pub fn h_samples(sample: SampleSpec) -> Vec<f64> {
    let mut out = vec![2f64.powi(-20), 0.5, 1.0, 2.0, 2.5, 10.0, 100.0, 1000.0];
    let mut rng = sample.rng(0x4_1c);
    while (out.len() as u64) < sample.count {
        out.push(rng.gen_range(0.0..64.0f64).max(f64::MIN_POSITIVE));
    }
    out.truncate(sample.count as usize);
    out
}

/// Certifies `H' > 0` at every sample and `H > 0` at samples with `x ≥ 2`.
pub fn verify_h_increasing(sample: SampleSpec, bits: u32) -> Result<LemmaReport, LemmaError> {
    let samples = h_samples(sample);
    let ladder = Ladder::from_bits(bits);
    let verdicts: Vec<Verdict> = samples
        .par_iter()
        .map(|&x| {
            let xi = Interval::from_f64(x, bits).expect("finite sample");
            let deriv = certify_sign(|p| h_gap_derivative(&xi, p), ladder.start, ladder.max);
            let value = if x >= 2.0 {
                certify_sign(|p| h_gap(&xi, p), ladder.start, ladder.max).map(|s| s.value)
            } else {
                Ok(SignValue::Positive)
            };
            match (deriv.map(|s| s.value), value) {
                (Ok(SignValue::Positive), Ok(SignValue::Positive)) => Verdict::Pass,
                (Ok(SignValue::Negative), _) | (_, Ok(SignValue::Negative)) => Verdict::Fail,
                _ => Verdict::Inconclusive,
            }
        })
        .collect();
    let mut rep = LemmaReport::new(LemmaId::HIncreasing, (0, sample.count));
    for (x, v) in samples.iter().zip(verdicts) {
        rep.record(v, || Witness::Point(vec![*x]));
    }
    Ok(rep)
}

pub fn x_prime_samples(sample: SampleSpec) -> Vec<f64> {
    let mut out = vec![
        2f64.powi(-20),
        0.5,
        1.0 - 2f64.powi(-10),
        1.0 + 2f64.powi(-10),
        1.0 - 2f64.powi(-20),
        1.0 + 2f64.powi(-20),
        2.0,
        1000.0,
    ];
    let mut rng = sample.rng(0x7_e1);
    while (out.len() as u64) < sample.count {
        let t = if rng.gen_bool(0.5) {
            rng.gen_range(0.0..2.0f64)
        } else {
            rng.gen_range(0.0..50.0)
        };
        if t > 0.0 && t != 1.0 {
            out.push(t);
        }
    }
    out.truncate(sample.count as usize);
    out
}

/// Certifies `x'(t) > 0` on samples from `(0, 1) ∪ (1, ∞)`.
pub fn verify_x_prime_positive(sample: SampleSpec, bits: u32) -> Result<LemmaReport, LemmaError> {
    let samples = x_prime_samples(sample);
    let verdicts: Vec<Verdict> = samples
        .par_iter()
        .map(|&t| {
            let ti = Interval::from_f64(t, bits).expect("finite sample");
            match segments::x_prime_sign(&ti, bits).map(|s| s.value) {
                Ok(SignValue::Positive) => Verdict::Pass,
                Ok(SignValue::Negative) => Verdict::Fail,
                _ => Verdict::Inconclusive,
            }
        })
        .collect();
    let mut rep = LemmaReport::new(LemmaId::XPrimePositive, (0, sample.count));
    for (t, v) in samples.iter().zip(verdicts) {
        rep.record(v, || Witness::Point(vec![*t]));
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionRow {
    pub i: u64,
    pub jump_index: u64,
    pub l_mid: f64,
    pub l_width: f64,
    /// `i < ln(t_{ℓ_i})/b < i + 1`, certified directly.
    pub inside: Verdict,
    /// `z_{ℓ_i} = i`, computed independently of the exact jump-index list.
    pub z_matches: bool,
    pub upper_endpoint: Verdict,
    pub lower_endpoint: Verdict,
}

impl CompositionRow {
    pub fn holds(&self) -> bool {
        self.inside.is_pass() && self.z_matches
    }
}

/// For each jump index `ℓ_i`, certifies `i < ln(t_{ℓ_i})/b < i + 1` from a direct
/// solve, checks `z_{ℓ_i} = i`, and records the two endpoint verdicts that should
/// imply the first.
pub fn composition_check(lo: u64, hi: u64, bits: u32) -> Result<Vec<CompositionRow>, LemmaError> {
    check_range(LemmaId::LowerEndpoint, lo, hi)?;
    let rows = par_witnesses(lo, hi, |i, m, r| -> Result<CompositionRow, LemmaError> {
        let ell = m.to_u64().ok_or(RealError::Overflow)?;
        let l = segments::l_n(ell, bits)?;
        let inside = if l.lo() > &Dyadic::from(i) && l.hi() < &Dyadic::from(i + 1) {
            Verdict::Pass
        } else if l.hi() <= &Dyadic::from(i) || l.lo() >= &Dyadic::from(i + 1) {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
        let z_matches = segments::z_n(ell, bits)? == i;
        let pow3_next = ((m << i) + r) * 3u32;
        let upper_endpoint = Verdict::from_bool(((m + 1u32) << (i + 1)) < pow3_next);
        let lower_endpoint = lower_endpoint_at(i, m, r, bits);
        Ok(CompositionRow {
            i,
            jump_index: ell,
            l_mid: l.mid_f64(),
            l_width: l.width_f64(),
            inside,
            z_matches,
            upper_endpoint,
            lower_endpoint,
        })
    })?;
    rows.into_iter().collect()
}

/// Ranges and sample counts for [`verify_all`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub bits: u32,
    pub seed: u64,
    pub lemma1: (u64, u64),
    pub ceil_transfer: (u64, u64),
    pub basic_bound: (u64, u64),
    pub upper_endpoint: (u64, u64),
    pub lower_endpoint: (u64, u64),
    pub mr_bound: (u64, u64),
    pub binomial_q: u64,
    pub x_prime: u64,
    pub h_increasing: u64,
    /// Flips the mR comparison; exercises the violation path end to end.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub invert_mr_bound: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            bits: 128,
            seed: 0,
            lemma1: (2, 1000),
            ceil_transfer: (2, 200),
            basic_bound: (2, 200),
            upper_endpoint: (2, 1000),
            lower_endpoint: (2, 500),
            mr_bound: (3, 10_000),
            binomial_q: 1000,
            x_prime: 200,
            h_increasing: 200,
            invert_mr_bound: false,
        }
    }
}

impl SuiteConfig {
    /// The ranges used by the acceptance run.
    pub fn acceptance() -> Self {
        SuiteConfig {
            bits: 128,
            seed: 0,
            lemma1: (2, 10_000),
            ceil_transfer: (2, 2000),
            basic_bound: (2, 2000),
            upper_endpoint: (2, 10_000),
            lower_endpoint: (2, 2000),
            mr_bound: (3, 100_000),
            binomial_q: 10_000,
            x_prime: 1000,
            h_increasing: 1000,
            invert_mr_bound: false,
        }
    }

    /// Every index range collapsed to `[lo, lo]` (mr_bound to `[3, 3]`) and a
    /// handful of samples.
    pub fn smoke(lo: u64) -> Self {
        SuiteConfig {
            bits: 64,
            seed: 0,
            lemma1: (lo, lo),
            ceil_transfer: (lo, lo),
            basic_bound: (lo, lo),
            upper_endpoint: (lo, lo),
            lower_endpoint: (lo, lo),
            mr_bound: (lo.max(3), lo.max(3)),
            binomial_q: 30,
            x_prime: 10,
            h_increasing: 10,
            invert_mr_bound: false,
        }
    }

    pub fn range_of(&self, id: LemmaId) -> Option<(u64, u64)> {
        match id {
            LemmaId::Lemma1 => Some(self.lemma1),
            LemmaId::CeilTransfer => Some(self.ceil_transfer),
            LemmaId::BasicBound => Some(self.basic_bound),
            LemmaId::UpperEndpoint => Some(self.upper_endpoint),
            LemmaId::LowerEndpoint => Some(self.lower_endpoint),
            LemmaId::MrBound => Some(self.mr_bound),
            _ => None,
        }
    }

    pub fn set_range(&mut self, id: LemmaId, range: (u64, u64)) {
        match id {
            LemmaId::Lemma1 => self.lemma1 = range,
            LemmaId::CeilTransfer => self.ceil_transfer = range,
            LemmaId::BasicBound => self.basic_bound = range,
            LemmaId::UpperEndpoint => self.upper_endpoint = range,
            LemmaId::LowerEndpoint => self.lower_endpoint = range,
            LemmaId::MrBound => self.mr_bound = range,
            LemmaId::BinomialQ => self.binomial_q = range.1,
            LemmaId::XPrimePositive => self.x_prime = range.1,
            LemmaId::HIncreasing => self.h_increasing = range.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRun {
    pub lemma_id: LemmaId,
    pub outcome: Result<LemmaReport, LemmaError>,
}

pub fn run_lemma(id: LemmaId, cfg: &SuiteConfig) -> LemmaRun {
    let bits = cfg.bits;
    let sample = |count| SampleSpec::new(count, cfg.seed);
    let outcome = match id {
        LemmaId::Lemma1 => verify_lemma1(cfg.lemma1.0, cfg.lemma1.1),
        LemmaId::CeilTransfer => {
            verify_ceil_transfer_range(cfg.ceil_transfer.0, cfg.ceil_transfer.1, bits)
        }
        LemmaId::BasicBound => verify_basic_bound(cfg.basic_bound.0, cfg.basic_bound.1, bits),
        LemmaId::BinomialQ => verify_binomial_q(sample(cfg.binomial_q), bits),
        LemmaId::UpperEndpoint => verify_upper_endpoint(cfg.upper_endpoint.0, cfg.upper_endpoint.1),
        LemmaId::LowerEndpoint => {
            verify_lower_endpoint(cfg.lower_endpoint.0, cfg.lower_endpoint.1, bits)
        }
        LemmaId::MrBound => verify_mr_bound(cfg.mr_bound.0, cfg.mr_bound.1, cfg.invert_mr_bound),
        LemmaId::XPrimePositive => verify_x_prime_positive(sample(cfg.x_prime), bits),
        LemmaId::HIncreasing => verify_h_increasing(sample(cfg.h_increasing), bits),
    };
    LemmaRun {
        lemma_id: id,
        outcome,
    }
}

/// Runs every verifier. A domain error in one lemma does not stop the others.
pub fn verify_all(cfg: &SuiteConfig) -> Vec<LemmaRun> {
    LemmaId::ALL.iter().map(|&id| run_lemma(id, cfg)).collect()
}

/// Sign of an already computed enclosure, as a verdict on "value > 0".
pub fn positive_verdict(v: &Interval) -> Verdict {
    match sign_of(v) {
        SignValue::Positive => Verdict::Pass,
        SignValue::Negative => Verdict::Fail,
        SignValue::ZeroOrUncertain => {
            if v.hi().is_zero() {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness(i: u64) -> (BigUint, BigUint) {
        let w = exact::power_witness(i).unwrap();
        (w.m, w.r)
    }

    #[test]
    fn lemma1_small() {
        let rep = verify_lemma1(2, 5).unwrap();
        assert_eq!((rep.checked, rep.passes), (4, 4));
        assert!(rep.all_pass());
        assert!(verify_lemma1(1, 5).is_err());
    }

    #[test]
    fn upper_endpoint_small() {
        let rep = verify_upper_endpoint(2, 7).unwrap();
        assert_eq!(rep.passes, 6);
    }

    #[test]
    fn mr_bound_examples_and_domain() {
        let rep = verify_mr_bound(3, 10, false).unwrap();
        assert_eq!(rep.passes, 8);
        let err = verify_mr_bound(2, 10, false).unwrap_err();
        assert!(matches!(err, LemmaError::Domain { min: 3, got: 2, .. }));
        let rep = verify_mr_bound(3, 6, true).unwrap();
        assert_eq!(
            rep.failures,
            (3..=6).map(Witness::Index).collect::<Vec<_>>()
        );
    }

    #[test]
    fn factorization_route() {
        for i in 3..200 {
            let (m, r) = witness(i);
            assert!(factorization_excluded(i, &m, &r), "i = {i}");
        }
        // i = 2 is where 2^i − 1 = 3 really is a power of three
        let (m, r) = witness(2);
        assert!(!factorization_excluded(2, &m, &r));
    }

    #[test]
    fn lower_endpoint_examples() {
        for i in [2, 3, 5] {
            let (m, r) = witness(i);
            assert_eq!(lower_endpoint_at(i, &m, &r, 64), Verdict::Pass);
        }
    }

    #[test]
    fn lower_endpoint_forms_agree() {
        for i in 2..=60 {
            let (m, r) = witness(i);
            assert_eq!(
                lower_endpoint_at(i, &m, &r, 64),
                lower_endpoint_log_form(i, &m, 64),
                "i={i}"
            );
        }
    }

    #[test]
    fn ceil_transfer_cases() {
        let t2 = segments::solve_t_n(2, 64).unwrap();
        assert_eq!(verify_ceil_transfer(&t2, 2, 64), Ok(true));
        let mid = Interval::from_f64(5.5, 64).unwrap();
        assert_eq!(verify_ceil_transfer(&mid, 5, 64), Ok(true));
        let bad = Interval::new(Dyadic::from(5u64), Dyadic::from(6u64), 64).unwrap();
        assert_eq!(
            verify_ceil_transfer(&bad, 5, 64),
            Err(CeilTransferError::AlphaOutsideBracket)
        );
        // ln(2.05)/b ≈ 1.77 is below z_2 = 2
        let low = Interval::from_f64(2.05, 64).unwrap();
        assert_eq!(
            verify_ceil_transfer(&low, 2, 64),
            Err(CeilTransferError::HypothesisFails)
        );
    }

    #[test]
    fn binomial_examples() {
        let s = BinomialSample::points(1.0, 0.0, 64);
        assert_eq!(binomial_q_at(&s, 64).unwrap(), None);
        let s = BinomialSample::points(2.0, 3.0, 64);
        assert_eq!(binomial_q_at(&s, 64).unwrap(), Some(Verdict::Pass));
        let samples = binomial_samples(SampleSpec::new(40, 0), 64);
        assert_eq!(samples.len(), 40);
        // a = 3, b = 1 − 3^{1−q}
        let app = &samples[8];
        assert!((app.b.mid_f64() - (1.0 - 0.45864544260058693)).abs() < 1e-12);
        assert_eq!(binomial_q_at(app, 64).unwrap(), Some(Verdict::Pass));
    }

    #[test]
    fn h_gap_values() {
        let h2 = h_gap(&Interval::from_int(2, 64), 64).unwrap();
        assert!((h2.mid_f64() - 0.09307910157531776).abs() < 1e-14);
        let c = Constants::at(128);
        let at_q = h_gap(&c.q, 64).unwrap();
        assert!(at_q.contains_zero());
        assert!(at_q.width_f64() < 1e-15);
    }

    #[test]
    fn samples_are_deterministic() {
        let sample = SampleSpec::new(50, 7);
        assert_eq!(h_samples(sample), h_samples(sample));
        assert_eq!(x_prime_samples(sample), x_prime_samples(sample));
        assert_ne!(h_samples(sample), h_samples(SampleSpec::new(50, 8)));
    }

    #[test]
    fn smoke_suite() {
        let runs = verify_all(&SuiteConfig::smoke(2));
        assert_eq!(runs.len(), 9);
        for run in &runs {
            let rep = run.outcome.as_ref().unwrap();
            assert!(rep.all_pass(), "{rep:?}");
        }
    }

    #[test]
    fn domain_error_is_isolated() {
        let mut cfg = SuiteConfig::smoke(2);
        cfg.mr_bound = (2, 10);
        let runs = verify_all(&cfg);
        for run in runs {
            if run.lemma_id == LemmaId::MrBound {
                assert!(run.outcome.is_err());
            } else {
                assert!(run.outcome.unwrap().all_pass());
            }
        }
    }

    #[test]
    fn lemma_names_round_trip() {
        for id in LemmaId::ALL {
            assert_eq!(id.as_str().parse::<LemmaId>().unwrap(), id);
        }
        assert!("nope".parse::<LemmaId>().is_err());
    }
}
