use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::dyadic::{Dyadic, Round};
use super::RealError;

/// Closed interval `[lo, hi]` with dyadic endpoints.
///
/// Every operation rounds outward to `bits` significant bits, so the result
/// always contains the exact image of the operands.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Result<Self, RealError> {
        if lo > hi {
            return Err(RealError::Inverted);
        }
        Ok(Interval { lo, hi, bits })
    }

    pub(crate) fn from_ordered(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval {lo:?} > {hi:?}");
        Interval { lo, hi, bits }
    }

    pub fn point(x: Dyadic, bits: u32) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            bits,
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T, bits: u32) -> Self {
        Interval::point(Dyadic::from_int(n), bits)
    }

    pub fn from_f64(x: f64, bits: u32) -> Result<Self, RealError> {
        Dyadic::from_f64(x)
            .map(|d| Interval::point(d, bits))
            .ok_or(RealError::NotFinite)
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: i64, den: i64, bits: u32) -> Result<Self, RealError> {
        Interval::from_int(num, bits).div(&Interval::from_int(den, bits))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(mut self, bits: u32) -> Self {
        self.bits = bits;
        self
    }

    /// Re-rounds the endpoints outward to `bits`.
    pub fn rounded(&self, bits: u32) -> Self {
        Interval {
            lo: self.lo.round(bits, Round::Down),
            hi: self.hi.round(bits, Round::Up),
            bits,
        }
    }

    fn out(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        Interval {
            lo: lo.round(bits, Round::Down),
            hi: hi.round(bits, Round::Up),
            bits,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64()
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.midpoint(&self.hi)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_int(&self, n: i64) -> bool {
        self.contains(&Dyadic::from_int(n))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `other ⊆ self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            bits: self.bits.max(other.bits),
        }
    }

    /// `Some(k)` when the interval lies strictly inside `(k, k + 1)`, which
    /// certifies both `⌊x⌋ = k` and that `x` is not an integer.
    pub fn strict_floor(&self) -> Option<BigInt> {
        let k = self.lo.floor();
        if Dyadic::from_int(k.clone()) == self.lo {
            return None;
        }
        let next = Dyadic::from_int(&k + BigInt::one());
        (self.hi < next).then_some(k)
    }

    /// `Some(k)` when `⌊x⌋ = k` for every `x` in the interval.
    pub fn certain_floor(&self) -> Option<BigInt> {
        let k = self.lo.floor();
        (self.hi.floor() == k).then_some(k)
    }

    fn prec(&self, other: &Interval) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::out(&self.lo + &other.lo, &self.hi + &other.hi, self.prec(other))
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::out(&self.lo - &other.hi, &self.hi - &other.lo, self.prec(other))
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let bits = self.prec(other);
        if !self.lo.is_negative() && !other.lo.is_negative() {
            return Interval::out(&self.lo * &other.lo, &self.hi * &other.hi, bits);
        }
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().expect("four candidates").clone();
        let hi = cands.iter().max().expect("four candidates").clone();
        Interval::out(lo, hi, bits)
    }

    pub fn sqr(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = self.lo.abs().max(self.hi.clone());
            return Interval::out(Dyadic::zero(), &m * &m, self.bits);
        }
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Interval::out(lo, hi, self.bits)
    }

    pub fn div(&self, other: &Interval) -> Result<Interval, RealError> {
        if other.contains_zero() {
            return Err(RealError::DivisionByZero);
        }
        if other.is_negative() {
            return self.neg().div(&other.neg());
        }
        let bits = self.prec(other);
        // positive divisor: each endpoint picks the divisor end that pushes it outward
        let lo_div = if self.lo.is_negative() {
            &other.lo
        } else {
            &other.hi
        };
        let hi_div = if self.hi.is_negative() {
            &other.hi
        } else {
            &other.lo
        };
        Ok(Interval {
            lo: self.lo.div(lo_div, bits, Round::Down),
            hi: self.hi.div(hi_div, bits, Round::Up),
            bits,
        })
    }

    pub fn div_int(&self, n: i64) -> Interval {
        self.div(&Interval::from_int(n, self.bits))
            .expect("nonzero integer divisor")
    }

    pub fn scale_pow2(&self, e: i64) -> Interval {
        Interval {
            lo: self.lo.shl(e),
            hi: self.hi.shl(e),
            bits: self.bits,
        }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Widens symmetrically by `[-e, e]`.
    pub fn widen(&self, e: &Dyadic) -> Interval {
        Interval::out(&self.lo - e, &self.hi + e, self.bits)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:e}, {:e}] (width {:e}, {} bits)",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.width_f64(),
            self.bits
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(
            Dyadic::from_f64(lo).unwrap(),
            Dyadic::from_f64(hi).unwrap(),
            64,
        )
        .unwrap()
    }

    #[test]
    fn rejects_inverted() {
        let r = Interval::new(Dyadic::one(), Dyadic::zero(), 64);
        assert!(matches!(r, Err(RealError::Inverted)));
    }

    #[test]
    fn mul_sign_cases() {
        assert_eq!(iv(-2.0, 3.0).mul(&iv(-1.0, 4.0)), iv(-8.0, 12.0));
        assert_eq!(iv(-2.0, -1.0).mul(&iv(3.0, 4.0)), iv(-8.0, -3.0));
        assert_eq!(iv(1.0, 2.0).mul(&iv(3.0, 4.0)), iv(3.0, 8.0));
    }

    #[test]
    fn sqr_straddling_zero() {
        assert_eq!(iv(-3.0, 2.0).sqr(), iv(0.0, 9.0));
        assert_eq!(iv(-3.0, -2.0).sqr(), iv(4.0, 9.0));
    }

    #[test]
    fn division() {
        let third = Interval::from_ratio(1, 3, 64).unwrap();
        assert!(third
            .mul(&Interval::from_int(3, 64))
            .contains(&Dyadic::one()));
        assert!(third.width_f64() > 0.0 && third.width_f64() < 1e-18);
        assert!(matches!(
            iv(1.0, 2.0).div(&iv(-1.0, 1.0)),
            Err(RealError::DivisionByZero)
        ));
    }

    #[test]
    fn floors() {
        assert_eq!(iv(2.1, 2.9).strict_floor(), Some(BigInt::from(2)));
        assert_eq!(iv(2.0, 2.9).strict_floor(), None);
        assert_eq!(iv(2.9, 3.1).strict_floor(), None);
        assert_eq!(iv(2.0, 2.9).certain_floor(), Some(BigInt::from(2)));
        assert_eq!(iv(-0.5, -0.25).strict_floor(), Some(BigInt::from(-1)));
    }

    #[test]
    fn containment_predicates() {
        let a = iv(1.0, 4.0);
        assert!(a.encloses(&iv(2.0, 3.0)));
        assert!(!a.encloses(&iv(0.0, 3.0)));
        assert!(iv(-1.0, 1.0).contains_zero());
        assert!(iv(0.0, 1.0).contains_zero());
        assert!(!iv(0.5, 1.0).contains_zero());
        assert!(iv(1.0, 2.0).certainly_lt(&iv(2.5, 3.0)));
    }
}
