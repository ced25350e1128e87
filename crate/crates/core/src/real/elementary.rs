//! Enclosures of `ln`, `exp` and the powers built from them.
//!
//! `ln` reduces to `y ∈ [3/4, 3/2)` and sums `2·atanh((y−1)/(y+1))`; `exp` halves its
//! argument below `2^-8`, sums the Taylor series and squares back. Both series carry
//! an explicit tail bound that is added to the enclosure before any rounding.

use std::cell::RefCell;
use std::collections::HashMap;

use super::dyadic::{Dyadic, Round};
use super::interval::Interval;
use super::RealError;

/// Extra bits carried internally by every public elementary function.
pub const GUARD_BITS: u32 = 24;

/// Largest `|x|` accepted by `exp`, as a power of two.
const EXP_MAX_MSB: i64 = 40;

/// `atanh(z)` for `|z| ≤ 1/3`.
fn atanh_series(z: &Interval, wp: u32) -> Interval {
    let zmag = z.mag();
    if zmag.is_zero() {
        return Interval::point(Dyadic::zero(), wp);
    }
    let z2 = z.sqr();
    let z2mag = (&zmag * &zmag).round(32, Round::Up);
    let tol = Dyadic::pow2(-(wp as i64) - 4);
    let mut pow = z.clone();
    let mut powmag = zmag.round(32, Round::Up);
    let mut sum = z.clone();
    let mut j: i64 = 1;
    loop {
        powmag = (&powmag * &z2mag).round(32, Round::Up);
        if powmag <= tol {
            // Σ_{i≥j} |z|^{2i+1}/(2i+1) ≤ |z|^{2j+1}/(1 − z²) ≤ 2|z|^{2j+1}
            return sum.widen(&powmag.shl(1));
        }
        pow = pow.mul(&z2);
        sum = sum.add(&pow.div_int(2 * j + 1));
        j += 1;
    }
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, Interval>> = RefCell::new(HashMap::new());
    static CONST_CACHE: RefCell<HashMap<u32, Constants>> = RefCell::new(HashMap::new());
}

/// `ln 2 = 2·atanh(1/3)`.
pub fn ln2(wp: u32) -> Interval {
    if let Some(hit) = LN2_CACHE.with(|c| c.borrow().get(&wp).cloned()) {
        return hit;
    }
    let inner = wp + 8;
    let third = Interval::from_int(1, inner).div_int(3);
    let v = atanh_series(&third, inner).scale_pow2(1).rounded(wp);
    LN2_CACHE.with(|c| c.borrow_mut().insert(wp, v.clone()));
    v
}

fn bit_len(n: i64) -> u32 {
    64 - n.unsigned_abs().leading_zeros()
}

/// Enclosure of `ln x` for a positive dyadic point, relative precision about `wp`.
pub fn ln_point(x: &Dyadic, wp: u32) -> Result<Interval, RealError> {
    if !x.is_positive() {
        return Err(RealError::Domain("ln of a non-positive value"));
    }
    if *x == Dyadic::one() {
        return Ok(Interval::point(Dyadic::zero(), wp));
    }
    let mut e = x.msb() - 1;
    let mut y = x.shl(-e);
    if y >= Dyadic::from_f64(1.5).expect("finite") {
        y = y.shl(-1);
        e += 1;
    }
    let inner = wp + 8;
    let one = Interval::from_int(1, inner);
    let yi = Interval::point(y, inner);
    let z = yi.sub(&one).div(&yi.add(&one))?;
    let ln_y = atanh_series(&z, inner).scale_pow2(1);
    let total = if e == 0 {
        ln_y
    } else {
        let l2 = ln2(inner + bit_len(e));
        l2.mul(&Interval::from_int(e, inner + bit_len(e)))
            .add(&ln_y)
    };
    Ok(total.rounded(wp))
}

/// Enclosure of `e^x` for a dyadic point, relative precision about `wp`.
pub fn exp_point(x: &Dyadic, wp: u32) -> Result<Interval, RealError> {
    if x.is_zero() {
        return Ok(Interval::point(Dyadic::one(), wp));
    }
    if x.msb() > EXP_MAX_MSB {
        return Err(RealError::Overflow);
    }
    let s = (x.msb() + 8).max(0);
    let inner = wp + s as u32 + 8;
    let r = Interval::point(x.shl(-s), inner);
    let rmag = r.mag();
    let tol = Dyadic::pow2(-(inner as i64) - 4);
    let mut term = Interval::from_int(1, inner);
    let mut acc = term.clone();
    let mut j: i64 = 1;
    let mut result = loop {
        let next_bound = (&term.mag() * &rmag).div(&Dyadic::from_int(j), 32, Round::Up);
        if next_bound <= tol {
            // |r| < 2^-8, so the tail is below twice its first term
            break acc.widen(&next_bound.shl(1));
        }
        term = term.mul(&r).div_int(j);
        acc = acc.add(&term);
        j += 1;
    };
    for _ in 0..s {
        result = result.sqr();
    }
    Ok(result.rounded(wp))
}

/// `ln` over an interval; `ln` is increasing so only the endpoints matter.
pub fn ln_interval(x: &Interval, wp: u32) -> Result<Interval, RealError> {
    if !x.lo().is_positive() {
        return Err(RealError::Domain(
            "ln of an interval reaching zero or below",
        ));
    }
    if x.is_point() {
        return ln_point(x.lo(), wp);
    }
    let lo = ln_point(x.lo(), wp)?;
    let hi = ln_point(x.hi(), wp)?;
    Ok(Interval::from_ordered(lo.lo().clone(), hi.hi().clone(), wp))
}

pub fn exp_interval(x: &Interval, wp: u32) -> Result<Interval, RealError> {
    if x.is_point() {
        return exp_point(x.lo(), wp);
    }
    let lo = exp_point(x.lo(), wp)?;
    let hi = exp_point(x.hi(), wp)?;
    Ok(Interval::from_ordered(lo.lo().clone(), hi.hi().clone(), wp))
}

/// Rounds a result so its absolute resolution is `2^-bits` once `|v| ≥ 1`
/// and its relative resolution is `2^-bits` below that.
pub(crate) fn finish(v: Interval, bits: u32) -> Interval {
    let msb = v.mag().msb().max(0);
    let prec = bits as i64 + msb;
    v.rounded(prec.min(u32::MAX as i64) as u32).with_bits(bits)
}

/// `b = ln(3/2)`, `q = ln 2 / ln(3/2)` and `ln 2`, at a common working precision.
#[derive(Debug, Clone)]
pub struct Constants {
    pub b: Interval,
    pub q: Interval,
    pub ln2: Interval,
}

impl Constants {
    pub fn at(wp: u32) -> Constants {
        if let Some(hit) = CONST_CACHE.with(|c| c.borrow().get(&wp).cloned()) {
            return hit;
        }
        let inner = wp + 8;
        let fifth = Interval::from_int(1, inner).div_int(5);
        let b = atanh_series(&fifth, inner).scale_pow2(1);
        let l2 = ln2(inner);
        let q = l2.div(&b).expect("ln(3/2) > 0");
        let c = Constants {
            b: b.rounded(wp),
            q: q.rounded(wp),
            ln2: l2.rounded(wp),
        };
        CONST_CACHE.with(|cache| cache.borrow_mut().insert(wp, c.clone()));
        c
    }
}

fn small_nonneg_int(x: &Interval) -> Option<u32> {
    if !x.is_point() || !x.lo().is_integer() || x.lo().is_negative() {
        return None;
    }
    let n = x.lo().floor();
    u32::try_from(n).ok().filter(|&n| n <= 1_000_000)
}

/// `(3/2)^x`; exact at non-negative integer points.
pub fn iv_pow_3_2(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    if let Some(k) = small_nonneg_int(x) {
        return Ok(Interval::point(Dyadic::three_halves_pow(k), bits));
    }
    let wp = bits + GUARD_BITS + x.mag().msb().max(0) as u32;
    let c = Constants::at(wp);
    let arg = x.rounded(wp).mul(&c.b);
    Ok(finish(exp_interval(&arg, wp)?, bits))
}

/// `2^x`; exact at non-negative integer points.
pub fn iv_pow_2(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    if let Some(k) = small_nonneg_int(x) {
        return Ok(Interval::point(Dyadic::pow2(k as i64), bits));
    }
    let wp = bits + GUARD_BITS + x.mag().msb().max(0) as u32;
    let c = Constants::at(wp);
    let arg = x.rounded(wp).mul(&c.ln2);
    Ok(finish(exp_interval(&arg, wp)?, bits))
}

/// `t^e = exp(e·ln t)` for `t > 0`.
pub fn iv_pow(t: &Interval, e: &Interval, bits: u32) -> Result<Interval, RealError> {
    if !t.lo().is_positive() {
        return Err(RealError::Domain("power of a non-positive base"));
    }
    let wp = bits + GUARD_BITS + 8;
    let l = ln_interval(t, wp)?;
    let wp = wp + l.mag().msb().max(0) as u32;
    Ok(finish(exp_interval(&e.mul(&l).rounded(wp), wp)?, bits))
}

/// `t^q`.
pub fn iv_pow_q(t: &Interval, bits: u32) -> Result<Interval, RealError> {
    let c = Constants::at(bits + GUARD_BITS + 8);
    iv_pow(t, &c.q, bits)
}

pub fn iv_ln(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    if !x.lo().is_positive() {
        return Err(RealError::Domain(
            "ln of an interval reaching zero or below",
        ));
    }
    let e = x.lo().msb().abs().max(x.hi().msb().abs());
    let v = ln_interval(x, bits + GUARD_BITS + bit_len(e))?;
    Ok(finish(v, bits))
}

pub fn iv_exp(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    let wp = bits + GUARD_BITS + x.mag().msb().max(0) as u32;
    Ok(finish(exp_interval(&x.rounded(wp), wp)?, bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, bits: u32) -> Interval {
        Interval::from_f64(x, bits).unwrap()
    }

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn ln_of_one_is_zero() {
        let v = iv_ln(&pt(1.0, 64), 64).unwrap();
        assert!(v.contains(&Dyadic::zero()));
        assert!(v.is_point());
    }

    #[test]
    fn ln_rejects_nonpositive() {
        assert!(iv_ln(&pt(0.0, 64), 64).is_err());
        assert!(iv_ln(&pt(-2.0, 64), 64).is_err());
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(iv_exp(&pt(0.0, 64), 64).unwrap(), Interval::from_int(1, 64));
    }

    #[test]
    fn exp_rejects_huge_arguments() {
        assert!(matches!(
            iv_exp(&pt(1e15, 64), 64),
            Err(RealError::Overflow)
        ));
    }

    #[test]
    fn exp_ln_round_trip_contains_argument() {
        for x in [0.001, 0.5, 1.5, 7.25, 1234.5, 1e9] {
            let l = iv_ln(&pt(x, 96), 96).unwrap();
            let back = iv_exp(&l, 96).unwrap();
            assert!(back.contains(&d(x)), "x={x} back={back:?}");
        }
    }

    #[test]
    fn negative_exponents() {
        let v = iv_exp(&pt(-20.0, 80), 80).unwrap();
        // e^-20 = 2.061153622438558e-9
        assert!((v.mid_f64() - 2.061153622438558e-9).abs() < 1e-22);
    }

    #[test]
    fn integer_points_are_exact() {
        let v = iv_pow_3_2(&Interval::from_int(10, 64), 64).unwrap();
        assert!(v.is_point());
        assert_eq!(v.lo().to_f64(), 59049.0 / 1024.0);
        assert!(iv_pow_2(&Interval::from_int(7, 64), 64).unwrap().is_point());
    }

    #[test]
    fn constants_are_cached_and_consistent() {
        let a = Constants::at(100);
        let b = Constants::at(100);
        assert_eq!(a.q, b.q);
        assert!(a.q.lo() > &Dyadic::one() && a.q.hi() < &Dyadic::from_int(2));
    }
}
