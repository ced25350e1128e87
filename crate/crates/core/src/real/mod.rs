//! Certified real arithmetic on dyadic intervals.

mod dyadic;
mod elementary;
mod interval;

use serde::Serialize;
use thiserror::Error;

pub use dyadic::{Dyadic, Round};
pub use elementary::{
    exp_interval, exp_point, iv_exp, iv_ln, iv_pow, iv_pow_2, iv_pow_3_2, iv_pow_q, ln_interval,
    ln_point, Constants, GUARD_BITS,
};
pub use interval::Interval;

pub(crate) use elementary::finish;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("interval endpoints are inverted")]
    Inverted,
    #[error("value is not finite")]
    NotFinite,
    #[error("exponent too large")]
    Overflow,
    #[error("floor of (3/2)^x is ambiguous at {bits} bits")]
    FloorAmbiguous { bits: u32 },
}

pub const DEFAULT_START_BITS: u32 = 64;
pub const DEFAULT_MAX_BITS: u32 = 512;

/// Doubling precision schedule `start, 2·start, …` capped at `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ladder {
    pub start: u32,
    pub max: u32,
}

impl Default for Ladder {
    fn default() -> Self {
        Ladder {
            start: DEFAULT_START_BITS,
            max: DEFAULT_MAX_BITS,
        }
    }
}

impl Ladder {
    pub fn new(start: u32, max: u32) -> Self {
        let start = start.max(8);
        Ladder {
            start,
            max: max.max(start),
        }
    }

    /// Ladder starting at `bits` and ending at `max(bits, 512)`.
    pub fn from_bits(bits: u32) -> Self {
        Ladder::new(bits, DEFAULT_MAX_BITS.max(bits))
    }

    pub fn rungs(&self) -> impl Iterator<Item = u32> {
        let max = self.max;
        let mut next = Some(self.start);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= max {
                None
            } else {
                Some(cur.saturating_mul(2).min(max))
            };
            Some(cur)
        })
    }

    /// First rung where `f` yields a value, with the rung it succeeded at.
    pub fn refine<T, E, F>(&self, mut f: F) -> Result<Option<(T, u32)>, E>
    where
        F: FnMut(u32) -> Result<Option<T>, E>,
    {
        for bits in self.rungs() {
            if let Some(v) = f(bits)? {
                return Ok(Some((v, bits)));
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignValue {
    Negative,
    ZeroOrUncertain,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CertifiedSign {
    pub value: SignValue,
    pub bits_used: u32,
}

impl CertifiedSign {
    pub fn is_positive(&self) -> bool {
        self.value == SignValue::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.value == SignValue::Negative
    }

    pub fn is_certain(&self) -> bool {
        self.value != SignValue::ZeroOrUncertain
    }
}

pub fn sign_of(v: &Interval) -> SignValue {
    if v.is_positive() {
        SignValue::Positive
    } else if v.is_negative() {
        SignValue::Negative
    } else {
        SignValue::ZeroOrUncertain
    }
}

/// Re-evaluates `expr` at doubling precision until its enclosure excludes zero.
/// At `max_bits` an undecided enclosure gives `ZeroOrUncertain`, never a guess.
pub fn certify_sign<E, F>(mut expr: F, start_bits: u32, max_bits: u32) -> Result<CertifiedSign, E>
where
    F: FnMut(u32) -> Result<Interval, E>,
{
    let ladder = Ladder::new(start_bits, max_bits);
    let mut last = ladder.start;
    for bits in ladder.rungs() {
        last = bits;
        let value = sign_of(&expr(bits)?);
        if value != SignValue::ZeroOrUncertain {
            return Ok(CertifiedSign {
                value,
                bits_used: bits,
            });
        }
    }
    Ok(CertifiedSign {
        value: SignValue::ZeroOrUncertain,
        bits_used: last,
    })
}

/// `2^x·((3/2)^x − ⌊(3/2)^x⌋) + ⌊(3/2)^x⌋`.
///
/// Fails with `FloorAmbiguous` when no rung up to `max(bits, 512)` pins the floor.
pub fn iv_f2(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    let ladder = Ladder::from_bits(bits);
    let found = ladder.refine(|p| {
        let pow = iv_pow_3_2(x, p)?;
        Ok::<_, RealError>(pow.certain_floor().map(|f| (pow, f)))
    })?;
    let ((pow, floor), p) = found.ok_or(RealError::FloorAmbiguous { bits: ladder.max })?;
    let fl = Interval::from_int(floor, p);
    let two = iv_pow_2(x, p)?;
    Ok(two.mul(&pow.sub(&fl)).add(&fl).with_bits(bits))
}

/// `φ₂(x) = 2^x + (3/2)^x − 1`.
pub fn iv_phi2(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    let two = iv_pow_2(x, bits)?;
    let three_halves = iv_pow_3_2(x, bits)?;
    Ok(two.add(&three_halves).sub(&Interval::from_int(1, bits)))
}

/// `φ₁(x) = (3/2)^x`.
pub fn iv_phi1(x: &Interval, bits: u32) -> Result<Interval, RealError> {
    iv_pow_3_2(x, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_rungs() {
        let r: Vec<u32> = Ladder::default().rungs().collect();
        assert_eq!(r, vec![64, 128, 256, 512]);
        let r: Vec<u32> = Ladder::new(100, 300).rungs().collect();
        assert_eq!(r, vec![100, 200, 300]);
        let r: Vec<u32> = Ladder::new(128, 128).rungs().collect();
        assert_eq!(r, vec![128]);
    }

    #[test]
    fn certify_constant() {
        let s = certify_sign(|b| Ok::<_, RealError>(Interval::from_int(-1, b)), 64, 512).unwrap();
        assert_eq!(s.value, SignValue::Negative);
        assert_eq!(s.bits_used, 64);
    }

    #[test]
    fn certify_true_zero_is_uncertain() {
        let s = certify_sign(
            |bits| {
                let c = Constants::at(bits);
                let x = Interval::from_ratio(3, 2, bits)?;
                Ok::<_, RealError>(iv_ln(&x, bits)?.sub(&c.b))
            },
            64,
            512,
        )
        .unwrap();
        assert_eq!(s.value, SignValue::ZeroOrUncertain);
        assert_eq!(s.bits_used, 512);
    }

    #[test]
    fn f2_small_points() {
        for (x, want) in [(0, 1), (1, 2), (2, 3)] {
            let v = iv_f2(&Interval::from_int(x, 64), 64).unwrap();
            assert!(v.contains_int(want), "F2({x}) = {v:?}");
        }
    }

    #[test]
    fn phi2_small_points() {
        let v = iv_phi2(&Interval::from_int(0, 64), 64).unwrap();
        assert!(v.contains_int(1));
        let v = iv_phi2(&Interval::from_int(1, 64), 64).unwrap();
        assert!(v.contains(&Dyadic::from_f64(2.5).unwrap()));
        let v = iv_phi2(&Interval::from_int(2, 64), 64).unwrap();
        assert!(v.contains(&Dyadic::from_f64(5.25).unwrap()));
    }
}
