//! Cross-checks against plain `f64` computations that share no code with the
//! interval engine.

use waring_lab::exact;
use waring_lab::segments;

const Q: f64 = 1.709_511_291_351_454_8;
const B: f64 = 0.405_465_108_108_164_4;

/// Bisection of `t^q (n + 1 − t) − n` on `[n, n + 1]` in `f64`.
fn t_n_f64(n: f64) -> f64 {
    let h = |t: f64| t.powf(Q) * (n + 1.0 - t) - n;
    let (mut lo, mut hi) = (n, n + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn t_n_matches_float_bisection() {
    for n in [2u64, 3, 5, 10, 56, 57, 100, 1000, 5000] {
        let t = segments::solve_t_n(n, 128).unwrap();
        let want = t_n_f64(n as f64);
        assert!(
            (t.mid_f64() - want).abs() <= 1e-12 * want,
            "n = {n}: {} vs {want}",
            t.mid_f64()
        );
        let l = segments::l_n(n, 128).unwrap();
        assert!((l.mid_f64() - want.ln() / B).abs() < 1e-11, "l_{n}");
    }
}

#[test]
fn u_n_matches_float_log() {
    for n in 1..200u64 {
        let u = segments::u_n(n, 128).unwrap();
        assert!((u.mid_f64() - ((n + 1) as f64).ln() / B).abs() < 1e-12);
    }
}

#[test]
fn frozen_endpoint_values() {
    // references from an independent multiprecision evaluation
    let cases = [
        (2u64, 2.612_743_940_052_536_1, 2.368_640_279_790_531_8),
        (10, 10.829_660_952_591_764, 5.875_447_002_879_425),
        (57, 57.944_794_571_522_977, 10.011_936_066_432_092),
        (5000, 5_000.997_626_490_925_3, 21.006_475_098_566_916),
    ];
    for (n, t, l) in cases {
        let ti = segments::solve_t_n(n, 128).unwrap();
        let li = segments::l_n(n, 128).unwrap();
        assert!((ti.mid_f64() - t).abs() <= 4.0 * f64::EPSILON * t, "t_{n}");
        assert!((li.mid_f64() - l).abs() <= 4.0 * f64::EPSILON * l, "l_{n}");
    }
    let u57 = segments::u_n(57, 128).unwrap();
    assert!((u57.mid_f64() - 10.014_284_655_692_816).abs() < 1e-14);
}

#[test]
fn fractional_parts_match_float_powers() {
    for k in 1..30u64 {
        let w = exact::power_witness(k).unwrap();
        let x = 1.5f64.powi(k as i32);
        assert_eq!(w.m.to_string(), x.floor().to_string());
        assert!((w.fractional_part_f64() - x.fract()).abs() < 1e-9);
    }
}

#[test]
fn g_against_brute_force() {
    for (k, limit, want) in [
        (1u32, 50u64, 1u64),
        (2, 100, 4),
        (3, 100, 9),
        (4, 100, 19),
        (5, 300, 37),
    ] {
        let g = exact::g_of_k(k as u64).unwrap().g;
        assert_eq!(g, want.into());
        assert_eq!(
            exact::brute_force_g(k, limit, exact::DEFAULT_TABLE_BUDGET).unwrap() as u64,
            want
        );
    }
}
