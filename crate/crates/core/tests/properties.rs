use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};
use proptest::prelude::*;

use waring_lab::exact::{self, WitnessWalker};
use waring_lab::real::{
    certify_sign, exp_point, iv_ln, iv_pow_q, ln_point, Dyadic, Interval, RealError, SignValue,
};
use waring_lab::segments;

fn dyadic(mant: i64, exp: i8) -> Dyadic {
    Dyadic::new(BigInt::from(mant), exp as i64)
}

fn overlaps(a: &Interval, b: &Interval) -> bool {
    a.lo() <= b.hi() && b.lo() <= a.hi()
}

proptest! {
    #[test]
    fn ring_ops_enclose_exact_results(a in -1_000_000i64..1_000_000, ea in -40i8..40,
                                      b in -1_000_000i64..1_000_000, eb in -40i8..40) {
        let (x, y) = (dyadic(a, ea), dyadic(b, eb));
        let (ix, iy) = (Interval::point(x.clone(), 24), Interval::point(y.clone(), 24));
        prop_assert!(ix.add(&iy).contains(&(&x + &y)));
        prop_assert!(ix.sub(&iy).contains(&(&x - &y)));
        prop_assert!(ix.mul(&iy).contains(&(&x * &y)));
    }

    #[test]
    fn division_encloses_quotient(a in -1_000_000i64..1_000_000, b in 1i64..1_000_000, neg: bool, bits in 16u32..200) {
        let b = if neg { -b } else { b };
        let q = Interval::from_int(a, bits).div(&Interval::from_int(b, bits)).unwrap();
        let db = Dyadic::from(b);
        let (lo, hi) = (q.lo() * &db, q.hi() * &db);
        let a = Dyadic::from(a);
        let (lo, hi) = if b > 0 { (lo, hi) } else { (hi, lo) };
        prop_assert!(lo <= a && a <= hi);
    }

    #[test]
    fn exp_inverts_ln(mant in 1i64..1_000_000_000, e in -30i8..30, bits in 40u32..300) {
        let x = dyadic(mant, e);
        let l = ln_point(&x, bits).unwrap();
        let lo = exp_point(l.lo(), bits).unwrap();
        let hi = exp_point(l.hi(), bits).unwrap();
        prop_assert!(lo.lo() <= &x && &x <= hi.hi());
    }

    #[test]
    fn refinement_is_consistent(mant in 1i64..1_000_000_000, e in -20i8..20) {
        let x = Interval::point(dyadic(mant, e), 64);
        let coarse = iv_ln(&x, 64).unwrap();
        let fine = iv_ln(&x, 256).unwrap();
        prop_assert!(overlaps(&coarse, &fine));
        prop_assert!(fine.width() <= coarse.width());
        let coarse = iv_pow_q(&x, 64).unwrap();
        let fine = iv_pow_q(&x, 256).unwrap();
        prop_assert!(overlaps(&coarse, &fine));
        prop_assert!(fine.width() <= coarse.width());
    }

    #[test]
    fn certify_sign_agrees_with_wide_evaluation(mant in 1i64..1_000_000, e in -10i8..10, c in -50i64..50) {
        // ln(x) − c/8 at increasing precision; a certified sign must match 256 bits
        let x = dyadic(mant, e);
        let f = |bits: u32| -> Result<Interval, RealError> {
            let c = Interval::point(dyadic(c, -3), bits);
            Ok(iv_ln(&Interval::point(x.clone(), bits), bits)?.sub(&c))
        };
        let s = certify_sign(f, 32, 128).unwrap();
        let wide = f(256).unwrap();
        match s.value {
            SignValue::Positive => prop_assert!(!wide.is_negative()),
            SignValue::Negative => prop_assert!(!wide.is_positive()),
            SignValue::ZeroOrUncertain => {}
        }
    }

    #[test]
    fn witness_round_trip(k in 1u64..600) {
        let w = exact::power_witness(k).unwrap();
        prop_assert_eq!(&w.m * &w.pow2 + &w.r, w.pow3.clone());
        prop_assert!(w.r < w.pow2);
        prop_assert_eq!(w.pow3, BigUint::from(3u32).pow(k as u32));
    }

    #[test]
    fn walker_matches_direct(start in 1u64..300, steps in 0u64..40) {
        let mut walker = WitnessWalker::new(start).unwrap();
        for _ in 0..steps {
            walker.advance();
        }
        let w = exact::power_witness(start + steps).unwrap();
        prop_assert_eq!(walker.m(), &w.m);
        prop_assert_eq!(walker.r(), &w.r);
    }

    #[test]
    fn mr_bound_is_carry_slack_at_least_two(i in 3u64..400) {
        let v = exact::carry_holds(i).unwrap();
        prop_assert_eq!(exact::mr_slack_check(i).unwrap(), v.slack >= BigInt::from(2));
    }

    #[test]
    fn t_n_residual_encloses_zero(n in 2u64..100_000) {
        let t = segments::solve_t_n(n, 96).unwrap();
        prop_assert!(t.lo() > &Dyadic::from(n) && t.hi() < &Dyadic::from(n + 1));
        let h = segments::h_over(n, &t, 96).unwrap();
        prop_assert!(h.contains_zero());
    }
}

#[test]
fn jump_indices_are_floors() {
    let list = exact::jump_indices(40).unwrap();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, ell) in list {
        num *= 3u32;
        den *= 2u32;
        assert_eq!(ell, &num / &den, "i = {i}");
    }
}
