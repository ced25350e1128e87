use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mant · 2^exp`, kept with an odd mantissa (or zero with `exp = 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        match self.mant.trailing_zeros() {
            None => self.exp = 0,
            Some(0) => {}
            Some(tz) => {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(mant) * sign, exp))
    }

    /// `num / den` rounded to `prec` significant bits in direction `dir`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Self {
        Dyadic::from_int(num.clone()).div(&Dyadic::from_int(den.clone()), prec, dir)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Position of the leading bit: `2^(msb-1) ≤ |x| < 2^msb`. Zero maps to `i64::MIN`.
    pub fn msb(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    /// Exact multiplication by `2^n`.
    pub fn shl(&self, n: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + n,
        }
    }

    /// Rounds to at most `prec` significant bits.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let divisor = BigInt::one() << shift;
        let q = match dir {
            Round::Down => self.mant.div_floor(&divisor),
            Round::Up => self.mant.div_ceil(&divisor),
        };
        Dyadic::new(q, self.exp + shift as i64)
    }

    /// `self / other` rounded to `prec` significant bits. Panics on division by zero.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // scale the numerator so the quotient carries at least prec + 2 bits
        let shift = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as u64;
        let q = match dir {
            Round::Down => num.div_floor(&other.mant),
            Round::Up => num.div_ceil(&other.mant),
        };
        Dyadic::new(q, self.exp - other.exp - shift).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as u64))
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            self.mant.div_ceil(&(BigInt::one() << (-self.exp) as u64))
        }
    }

    /// Nearest `f64`, truncating beyond 64 mantissa bits. Display only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            let drop = bits - 64;
            (&self.mant >> drop, self.exp + drop as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        if e > 4000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -4000 {
            return 0.0;
        }
        // split the scaling so intermediate powers stay finite
        let half = e / 2;
        m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    pub fn midpoint(&self, other: &Dyadic) -> Dyadic {
        (self + other).shl(-1)
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// `3^k / 2^k`, exact.
    pub fn three_halves_pow(k: u32) -> Dyadic {
        let p = BigUint::from(3u32).pow(k);
        Dyadic::new(BigInt::from(p), -(k as i64))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} (~{:e})", self.mant, self.exp, self.to_f64())
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
    let e = a.exp.min(b.exp);
    let am = &a.mant << (a.exp - e) as u64;
    let bm = &b.mant << (b.exp - e) as u64;
    (am, bm, e)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes by leading bit before aligning
        let (ma, mb) = (self.msb(), other.msb());
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let (am, bm, _) = align(self, other);
        am.cmp(&bm)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (am, bm, e) = align(self, rhs);
        Dyadic::new(am + bm, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // both mantissas odd, so the product is already normalised
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<u64> for Dyadic {
    fn from(n: u64) -> Self {
        Dyadic::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn normalisation_and_equality() {
        assert_eq!(Dyadic::from_int(12), Dyadic::new(BigInt::from(3), 2));
        assert_eq!(d(0.75), Dyadic::new(BigInt::from(3), -2));
        assert_eq!(Dyadic::new(BigInt::zero(), 17), Dyadic::zero());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&d(1.5) + &d(0.25), d(1.75));
        assert_eq!(&d(1.5) - &d(2.0), d(-0.5));
        assert_eq!(&d(1.5) * &d(-0.5), d(-0.75));
        assert_eq!(d(3.0).shl(-3), d(0.375));
    }

    #[test]
    fn ordering() {
        assert!(d(-3.0) < d(-2.5));
        assert!(d(0.0) < d(1e-300));
        assert!(d(1024.0) > d(1023.75));
        assert!(d(-1e10) < d(-1.0));
        assert_eq!(d(2.0).cmp(&Dyadic::from_int(2)), Ordering::Equal);
    }

    #[test]
    fn directed_rounding() {
        let x = Dyadic::from_int(0b1011_0111);
        assert_eq!(x.round(4, Round::Down), Dyadic::from_int(0b1011_0000));
        assert_eq!(x.round(4, Round::Up), Dyadic::from_int(0b1100_0000));
        let y = -&x;
        assert_eq!(y.round(4, Round::Down), Dyadic::from_int(-0b1100_0000));
        assert_eq!(y.round(4, Round::Up), Dyadic::from_int(-0b1011_0000));
    }

    #[test]
    fn division_brackets_one_third() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = one.div(&three, 64, Round::Down);
        let hi = one.div(&three, 64, Round::Up);
        assert!(&lo * &three < one);
        assert!(&hi * &three > one);
        assert!(&hi - &lo <= Dyadic::pow2(-65));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(d(2.5).floor(), BigInt::from(2));
        assert_eq!(d(2.5).ceil(), BigInt::from(3));
        assert_eq!(d(-2.5).floor(), BigInt::from(-3));
        assert_eq!(d(-2.5).ceil(), BigInt::from(-2));
        assert_eq!(d(7.0).floor(), BigInt::from(7));
        assert_eq!(d(7.0).ceil(), BigInt::from(7));
    }

    #[test]
    fn f64_round_trip() {
        for x in [0.1, -3.75, 1e-310, 6.02e23, 1.0 / 3.0] {
            assert_eq!(d(x).to_f64(), x);
        }
        assert!(Dyadic::from_f64(f64::NAN).is_none());
    }

    #[test]
    fn three_halves_powers() {
        assert_eq!(Dyadic::three_halves_pow(2), d(2.25));
        assert_eq!(Dyadic::three_halves_pow(10).to_f64(), 59049.0 / 1024.0);
    }
}
