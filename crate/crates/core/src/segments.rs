//! Geometry of the comb `F₂`: the segment endpoints `u_n = ln(n+1)/b` and
//! `l_n = ln(t_n)/b`, where `t_n ∈ (n, n+1)` solves `t^q (n + 1 − t) = n`.
//!
//! A segment straddles an integer when `⌈l_n⌉ = ⌊u_n⌋`. Everything here is
//! certified per index; precision exhaustion is reported, never rounded into
//! a verdict.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact;
use crate::real::{
    certify_sign, exp_interval, finish, ln_interval, ln_point, CertifiedSign, Constants, Dyadic,
    Interval, Ladder, RealError, SignValue, GUARD_BITS,
};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error(transparent)]
    Real(#[from] RealError),
    #[error("{what} must be at least {min}, got {got}")]
    BelowDomain {
        what: &'static str,
        min: u64,
        got: u64,
    },
    #[error("empty range [{lo}, {hi}]")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("bracket signs for t_{n} did not certify")]
    BracketFailure { n: u64 },
    #[error("precision exhausted at {bits} bits while certifying {what} for n = {n}")]
    PrecisionExhausted {
        n: u64,
        what: &'static str,
        bits: u32,
    },
    #[error("x(t) is singular at t = 1")]
    SingularAt1,
}

fn require(what: &'static str, min: u64, got: u64) -> Result<(), SegmentError> {
    if got < min {
        Err(SegmentError::BelowDomain { what, min, got })
    } else {
        Ok(())
    }
}

fn require_range(lo: u64, hi: u64) -> Result<(), SegmentError> {
    if lo > hi {
        Err(SegmentError::EmptyRange { lo, hi })
    } else {
        Ok(())
    }
}

fn bit_len(n: u64) -> u32 {
    64 - n.leading_zeros()
}

/// `u_n = ln(n+1)/ln(3/2)`.
pub fn u_n(n: u64, bits: u32) -> Result<Interval, SegmentError> {
    require("n", 1, n)?;
    let wp = bits + GUARD_BITS + bit_len(n);
    let c = Constants::at(wp);
    let l = ln_point(&Dyadic::from(n + 1), wp)?;
    Ok(finish(l.div(&c.b)?, bits))
}

/// `z_n = ⌊u_n⌋`, certified by an enclosure strictly between two integers.
pub fn z_n(n: u64, bits: u32) -> Result<u64, SegmentError> {
    let ladder = Ladder::from_bits(bits);
    let found = ladder.refine(|p| Ok::<_, SegmentError>(u_n(n, p)?.strict_floor()))?;
    let (z, _) = found.ok_or(SegmentError::PrecisionExhausted {
        n,
        what: "floor of u_n",
        bits: ladder.max,
    })?;
    Ok(z.to_u64().expect("z_n is small"))
}

/// `h(t) = t^q (n + 1 − t) − n` at a dyadic point.
fn h_at(n: u64, t: &Dyadic, bits: u32) -> Result<Interval, RealError> {
    let wp = bits + 8;
    let c = Constants::at(wp);
    let lt = ln_point(t, wp)?;
    let tq = exp_interval(&c.q.mul(&lt), wp)?;
    let factor = &Dyadic::from(n + 1) - t;
    Ok(tq
        .mul(&Interval::point(factor, wp))
        .sub(&Interval::from_int(n, wp)))
}

/// `h(t)` over an interval of `t`, by monotone endpoint evaluation of `t^q`.
pub fn h_over(n: u64, t: &Interval, bits: u32) -> Result<Interval, RealError> {
    let wp = bits + GUARD_BITS;
    let c = Constants::at(wp);
    let tq = exp_interval(&c.q.mul(&ln_interval(t, wp)?), wp)?;
    let factor = Interval::from_int(n + 1, wp).sub(t);
    Ok(tq.mul(&factor).sub(&Interval::from_int(n, wp)))
}

fn h_sign(n: u64, t: &Dyadic, start: u32, max: u32) -> Result<CertifiedSign, RealError> {
    certify_sign(|p| h_at(n, t, p), start, max)
}

/// Root `t_n ∈ (n, n+1)` of `t^q (n + 1 − t) = n` by sign-certified bisection.
///
/// `h` is strictly decreasing on `[n, n+1]`, so a certified `h(a) > 0 > h(b)`
/// brackets the unique root. The result has width at most `2^(4 − bits)`.
pub fn solve_t_n(n: u64, bits: u32) -> Result<Interval, SegmentError> {
    require("n", 2, n)?;
    let wp = bits + GUARD_BITS + bit_len(n);
    let max = wp * 4;
    let mut lo = Dyadic::from(n);
    let mut hi = Dyadic::from(n + 1);
    if !h_sign(n, &lo, 64, max)?.is_positive() || !h_sign(n, &hi, 64, max)?.is_negative() {
        return Err(SegmentError::BracketFailure { n });
    }
    let target = Dyadic::pow2(4 - bits as i64);
    let mut start = 64;
    while &hi - &lo > target {
        let mid = lo.midpoint(&hi);
        let s = h_sign(n, &mid, start, max)?;
        start = s.bits_used;
        match s.value {
            SignValue::Positive => lo = mid,
            SignValue::Negative => hi = mid,
            SignValue::ZeroOrUncertain => {
                // root is within reach of mid; try to pin it between the quarter points
                let quarter = (&hi - &lo).shl(-2);
                let a = &mid - &quarter;
                let b = &mid + &quarter;
                let sa = h_sign(n, &a, start, max)?;
                let sb = h_sign(n, &b, start, max)?;
                if sa.is_positive() && sb.is_negative() {
                    lo = a;
                    hi = b;
                } else {
                    return Err(SegmentError::PrecisionExhausted {
                        n,
                        what: "sign of h near t_n",
                        bits: max,
                    });
                }
            }
        }
    }
    Ok(Interval::new(lo, hi, bits)?)
}

/// `l_n = ln(t_n)/ln(3/2)`.
pub fn l_n(n: u64, bits: u32) -> Result<Interval, SegmentError> {
    let t = solve_t_n(n, bits)?;
    l_from_t(&t, bits)
}

fn l_from_t(t: &Interval, bits: u32) -> Result<Interval, SegmentError> {
    let wp = bits + GUARD_BITS + 8;
    let c = Constants::at(wp);
    let l = ln_interval(t, wp)?;
    Ok(finish(l.div(&c.b)?, bits))
}

/// `n + 1 − n^{1−q}`, the lower end of the basic bound on `t_n`.
pub fn basic_lower_bound(n: u64, bits: u32) -> Result<Interval, SegmentError> {
    let wp = bits + GUARD_BITS + bit_len(n);
    let c = Constants::at(wp);
    let one = Interval::from_int(1, wp);
    let ln_n = ln_point(&Dyadic::from(n), wp)?;
    let delta = exp_interval(&one.sub(&c.q).mul(&ln_n), wp)?;
    Ok(Interval::from_int(n + 1, wp).sub(&delta))
}

/// `n + 1 − n^{1−q} ≤ t_n < n + 1`, certified.
pub fn basic_bound_holds(n: u64, bits: u32) -> Result<Verdict, SegmentError> {
    require("n", 2, n)?;
    let upper = Dyadic::from(n + 1);
    for p in Ladder::from_bits(bits).rungs() {
        let t = solve_t_n(n, p)?;
        let lb = basic_lower_bound(n, p)?;
        if lb.lo() > t.hi() || t.lo() >= &upper {
            return Ok(Verdict::Fail);
        }
        if lb.hi() <= t.lo() && t.hi() < &upper {
            return Ok(Verdict::Pass);
        }
    }
    Ok(Verdict::Inconclusive)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentBounds {
    pub n: u64,
    pub u: Interval,
    pub t: Interval,
    pub l: Interval,
    pub ceil_l: BigInt,
    pub ceil_u: BigInt,
    pub floor_u: BigInt,
    pub straddles: bool,
    pub bits_used: u32,
}

/// Certified bundle for segment `n`, refining precision until every field is
/// pinned down or the ladder runs out.
pub fn segment_bounds(n: u64, bits: u32) -> Result<SegmentBounds, SegmentError> {
    require("n", 2, n)?;
    let lo_bound = Dyadic::from(n);
    let hi_bound = Dyadic::from(n + 1);
    let ladder = Ladder::from_bits(bits);
    for p in ladder.rungs() {
        let u = u_n(n, p)?;
        let t = solve_t_n(n, p)?;
        if !(t.lo() > &lo_bound && t.hi() < &hi_bound) {
            return Err(SegmentError::BracketFailure { n });
        }
        let l = l_from_t(&t, p)?;
        let (Some(floor_u), Some(floor_l)) = (u.strict_floor(), l.strict_floor()) else {
            continue;
        };
        if !(l.lo().is_positive() && l.certainly_lt(&u)) {
            continue;
        }
        let ceil_l = floor_l + 1;
        let ceil_u = &floor_u + 1;
        let straddles = ceil_l == floor_u;
        return Ok(SegmentBounds {
            n,
            u,
            t,
            l,
            ceil_l,
            ceil_u,
            floor_u,
            straddles,
            bits_used: p,
        });
    }
    Err(SegmentError::PrecisionExhausted {
        n,
        what: "segment endpoints",
        bits: ladder.max,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentRow {
    pub n: u64,
    pub u_mid: f64,
    pub u_width: f64,
    pub t_mid: f64,
    pub t_width: f64,
    pub l_mid: f64,
    pub l_width: f64,
    pub ceil_l: i64,
    pub ceil_u: i64,
    pub floor_u: i64,
    pub straddles: bool,
    pub bits_used: u32,
}

impl From<&SegmentBounds> for SegmentRow {
    fn from(s: &SegmentBounds) -> Self {
        let small = |v: &BigInt| v.to_i64().expect("segment integers are small");
        SegmentRow {
            n: s.n,
            u_mid: s.u.mid_f64(),
            u_width: s.u.width_f64(),
            t_mid: s.t.mid_f64(),
            t_width: s.t.width_f64(),
            l_mid: s.l.mid_f64(),
            l_width: s.l.width_f64(),
            ceil_l: small(&s.ceil_l),
            ceil_u: small(&s.ceil_u),
            floor_u: small(&s.floor_u),
            straddles: s.straddles,
            bits_used: s.bits_used,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inconclusive {
    pub n: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StraddleReport {
    pub n_min: u64,
    pub n_max: u64,
    pub straddle_hits: Vec<u64>,
    pub ceil_equal_count: u64,
    pub inconclusive: Vec<Inconclusive>,
    /// Indices where `u_{n−1} < l_n < u_n` or `l_{n−1} < l_n` failed to certify.
    pub order_failures: Vec<u64>,
    pub max_t_width: f64,
    pub rows: Vec<SegmentRow>,
}

/// Classifies every segment in `[n_min, n_max]`; per-`n` work runs in parallel
/// and is merged in index order.
pub fn straddle_scan(n_min: u64, n_max: u64, bits: u32) -> Result<StraddleReport, SegmentError> {
    require("n_min", 2, n_min)?;
    require_range(n_min, n_max)?;
    let results: Vec<Result<SegmentBounds, SegmentError>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| segment_bounds(n, bits))
        .collect();
    let mut prev_u = u_n(n_min - 1, bits)?;
    let mut prev_l: Option<Interval> = None;
    let mut report = StraddleReport {
        n_min,
        n_max,
        straddle_hits: Vec::new(),
        ceil_equal_count: 0,
        inconclusive: Vec::new(),
        order_failures: Vec::new(),
        max_t_width: 0.0,
        rows: Vec::new(),
    };
    for (n, res) in (n_min..=n_max).zip(results) {
        match res {
            Ok(s) => {
                if s.straddles {
                    report.straddle_hits.push(n);
                }
                if s.ceil_l == s.ceil_u {
                    report.ceil_equal_count += 1;
                }
                let ordered = prev_u.certainly_lt(&s.l)
                    && s.l.certainly_lt(&s.u)
                    && prev_l.as_ref().is_none_or(|pl| pl.certainly_lt(&s.l));
                if !ordered {
                    report.order_failures.push(n);
                }
                report.max_t_width = report.max_t_width.max(s.t.width_f64());
                report.rows.push(SegmentRow::from(&s));
                prev_u = s.u.clone();
                prev_l = Some(s.l);
            }
            Err(e) => {
                report.inconclusive.push(Inconclusive {
                    n,
                    reason: e.to_string(),
                });
                prev_u = u_n(n, bits)?;
                prev_l = None;
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    pub start: u64,
    pub end: u64,
    pub z: u64,
    /// Whether `start` is a genuine jump index rather than the clipped range start.
    pub starts_at_jump: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub n_min: u64,
    pub n_max: u64,
    pub jump_indices: Vec<u64>,
    pub blocks: Vec<Block>,
    /// `n` where `l_n > z_n` failed when checked directly.
    pub direct_failures: Vec<u64>,
    /// Blocks whose first index fails `l > z`, or where `l` is not certified increasing.
    pub reduction_failures: Vec<u64>,
    /// Jump indices that are not of the form `⌊(3/2)^z⌋`.
    pub jump_mismatches: Vec<u64>,
    pub inconclusive: Vec<Inconclusive>,
    pub agrees: bool,
    pub holds: bool,
}

/// Checks `l_n > z_n` directly for each `n`, and separately through the block
/// reduction: `z` constant between jump indices and `l` increasing, so checking
/// the first index of each block settles the whole block. Both routes must agree.
pub fn monotonicity_transfer_check(
    n_min: u64,
    n_max: u64,
    bits: u32,
) -> Result<TransferReport, SegmentError> {
    require("n_min", 2, n_min)?;
    require_range(n_min, n_max)?;
    let per_n: Vec<Result<(u64, Interval), SegmentError>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| Ok((z_n(n, bits)?, segment_bounds(n, bits)?.l)))
        .collect();
    let mut report = TransferReport {
        n_min,
        n_max,
        jump_indices: Vec::new(),
        blocks: Vec::new(),
        direct_failures: Vec::new(),
        reduction_failures: Vec::new(),
        jump_mismatches: Vec::new(),
        inconclusive: Vec::new(),
        agrees: true,
        holds: false,
    };
    let mut data = Vec::with_capacity(per_n.len());
    for (n, r) in (n_min..=n_max).zip(per_n) {
        match r {
            Ok((z, l)) => data.push((n, z, l)),
            Err(e) => report.inconclusive.push(Inconclusive {
                n,
                reason: e.to_string(),
            }),
        }
    }
    if !report.inconclusive.is_empty() {
        report.agrees = false;
        return Ok(report);
    }

    let above = |l: &Interval, z: u64| l.lo() > &Dyadic::from(z);
    for (n, z, l) in &data {
        if !above(l, *z) {
            report.direct_failures.push(*n);
        }
    }

    let mut prev_z = z_n(n_min - 1, bits)?;
    let mut i = 0;
    while i < data.len() {
        let (start, z, _) = data[i];
        let starts_at_jump = z > prev_z;
        if starts_at_jump {
            report.jump_indices.push(start);
            let expected = exact::power_witness(z)
                .map(|w| w.m.to_u64() == Some(start))
                .unwrap_or(false);
            if !expected {
                report.jump_mismatches.push(start);
            }
        }
        let mut j = i;
        let mut increasing = true;
        while j + 1 < data.len() && data[j + 1].1 == z {
            increasing &= data[j].2.certainly_lt(&data[j + 1].2);
            j += 1;
        }
        let end = data[j].0;
        if !(above(&data[i].2, z) && increasing) {
            report.reduction_failures.push(start);
        }
        report.blocks.push(Block {
            start,
            end,
            z,
            starts_at_jump,
        });
        prev_z = z;
        i = j + 1;
    }

    let direct_ok = report.direct_failures.is_empty();
    let reduction_ok = report.reduction_failures.is_empty();
    // a passing reduction must never coexist with a direct failure
    report.agrees = !(reduction_ok && !direct_ok);
    report.holds = direct_ok && reduction_ok && report.agrees && report.jump_mismatches.is_empty();
    Ok(report)
}

/// `x(t) = t^q (1 − t)/(1 − t^q)`, the inverse of `t ↦ x` on the non-trivial branch.
pub fn x_of_t(t: &Interval, bits: u32) -> Result<Interval, SegmentError> {
    if !t.lo().is_positive() {
        return Err(RealError::Domain("x(t) needs t > 0").into());
    }
    if t.contains(&Dyadic::one()) {
        return Err(SegmentError::SingularAt1);
    }
    let dist = (t.lo() - &Dyadic::one())
        .abs()
        .min((t.hi() - &Dyadic::one()).abs());
    let cancel = (-dist.msb()).max(0) as u32;
    let wp = bits + GUARD_BITS + cancel + t.mag().msb().max(0) as u32;
    let c = Constants::at(wp);
    let tq = exp_interval(&c.q.mul(&ln_interval(t, wp)?), wp)?;
    let one = Interval::from_int(1, wp);
    let den = one.sub(&tq);
    if den.contains_zero() {
        return Err(SegmentError::SingularAt1);
    }
    Ok(finish(tq.mul(&one.sub(t)).div(&den)?, bits))
}

/// `x'(t) = t^{q−1} (t^{q+1} − (q+1)t + q) / (t^q − 1)²`.
fn x_prime(t: &Interval, bits: u32) -> Result<Interval, SegmentError> {
    let wp = bits + GUARD_BITS + t.mag().msb().max(0) as u32;
    let c = Constants::at(wp);
    let one = Interval::from_int(1, wp);
    let lt = ln_interval(t, wp)?;
    let pow = |e: &Interval| exp_interval(&e.mul(&lt), wp);
    let t_qm1 = pow(&c.q.sub(&one))?;
    let t_qp1 = pow(&c.q.add(&one))?;
    let t_q = pow(&c.q)?;
    let num = t_qp1.sub(&c.q.add(&one).mul(t)).add(&c.q);
    let den = t_q.sub(&one).sqr();
    Ok(t_qm1.mul(&num).div(&den)?)
}

pub fn x_prime_sign(t: &Interval, bits: u32) -> Result<CertifiedSign, SegmentError> {
    if !t.lo().is_positive() {
        return Err(RealError::Domain("x'(t) needs t > 0").into());
    }
    if t.contains(&Dyadic::one()) {
        return Err(SegmentError::SingularAt1);
    }
    let ladder = Ladder::from_bits(bits);
    certify_sign(
        |p| match x_prime(t, p) {
            Err(SegmentError::Real(RealError::DivisionByZero)) => Ok(Interval::from_int(0, p)),
            other => other,
        },
        ladder.start,
        ladder.max,
    )
}
