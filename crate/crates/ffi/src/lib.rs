//! C ABI over `waring-lab`.
//!
//! Results come back through opaque handles that the caller releases with the
//! matching `*_free` function. Every entry point returns a [`WlStatus`]; on
//! anything but `WL_STATUS_OK` the thread's last error message is set and can
//! be read with [`wl_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use waring_lab::exact::{self, CarryScanReport, ExactError};
use waring_lab::lemmas::{self, LemmaError, LemmaId, LemmaReport, SuiteConfig, Witness};
use waring_lab::real::{Interval, RealError};
use waring_lab::segments::{self, SegmentBounds, SegmentError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    PrecisionExhausted = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlLemma {
    Lemma1 = 0,
    CeilTransfer = 1,
    BasicBound = 2,
    BinomialQ = 3,
    UpperEndpoint = 4,
    LowerEndpoint = 5,
    MrBound = 6,
    XPrimePositive = 7,
    HIncreasing = 8,
}

impl From<WlLemma> for LemmaId {
    fn from(l: WlLemma) -> Self {
        match l {
            WlLemma::Lemma1 => LemmaId::Lemma1,
            WlLemma::CeilTransfer => LemmaId::CeilTransfer,
            WlLemma::BasicBound => LemmaId::BasicBound,
            WlLemma::BinomialQ => LemmaId::BinomialQ,
            WlLemma::UpperEndpoint => LemmaId::UpperEndpoint,
            WlLemma::LowerEndpoint => LemmaId::LowerEndpoint,
            WlLemma::MrBound => LemmaId::MrBound,
            WlLemma::XPrimePositive => LemmaId::XPrimePositive,
            WlLemma::HIncreasing => LemmaId::HIncreasing,
        }
    }
}

/// Certified enclosure of a real number.
pub struct WlInterval(Interval);

/// Result of a carry-condition scan.
pub struct WlCarryReport(CarryScanReport);

/// Certified endpoints of one comb segment.
pub struct WlSegment(SegmentBounds);

/// Result of one lemma verifier.
pub struct WlLemmaReport(LemmaReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(WlStatus, String);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        let status = match e {
            ExactError::MemoryBudget { .. } => WlStatus::OutOfRange,
            _ => WlStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

impl From<RealError> for Failure {
    fn from(e: RealError) -> Self {
        let status = match e {
            RealError::FloorAmbiguous { .. } => WlStatus::PrecisionExhausted,
            _ => WlStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

impl From<SegmentError> for Failure {
    fn from(e: SegmentError) -> Self {
        let status = match e {
            SegmentError::PrecisionExhausted { .. } | SegmentError::BracketFailure { .. } => {
                WlStatus::PrecisionExhausted
            }
            SegmentError::Real(r) => return r.into(),
            _ => WlStatus::Domain,
        };
        Failure(status, e.to_string())
    }
}

impl From<LemmaError> for Failure {
    fn from(e: LemmaError) -> Self {
        Failure(WlStatus::Domain, e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F>(f: F) -> WlStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_error();
            WlStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            WlStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(WlStatus::NullPointer, format!("{what} is null"))
}

fn bits_ok(bits: u32) -> Result<(), Failure> {
    if bits < 32 {
        return Err(Failure(
            WlStatus::InvalidArgument,
            format!("bits must be at least 32, got {bits}"),
        ));
    }
    Ok(())
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn get<'a, T>(h: *const T) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null("handle"))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = v;
    Ok(())
}

/// Last error message on this thread, or null. The pointer stays valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn wl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn wl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `g(k)` as a decimal string. Free it with `wl_string_free`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn wl_g_of_k(k: u64, out: *mut *mut c_char) -> WlStatus {
    guard(|| {
        let g = exact::g_of_k(k)?.g.to_string();
        write(out, CString::new(g).expect("digits only").into_raw())
    })
}

// ---- intervals ----

/// `u_n = ln(n+1)/ln(3/2)`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn wl_u_n(n: u64, bits: u32, out: *mut *mut WlInterval) -> WlStatus {
    guard(|| {
        bits_ok(bits)?;
        put(out, WlInterval(segments::u_n(n, bits)?))
    })
}

/// The root `t_n ∈ (n, n+1)` of `t^q (n + 1 − t) = n`, for `n ≥ 2`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn wl_t_n(n: u64, bits: u32, out: *mut *mut WlInterval) -> WlStatus {
    guard(|| {
        bits_ok(bits)?;
        put(out, WlInterval(segments::solve_t_n(n, bits)?))
    })
}

/// `l_n = ln(t_n)/ln(3/2)`, for `n ≥ 2`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn wl_l_n(n: u64, bits: u32, out: *mut *mut WlInterval) -> WlStatus {
    guard(|| {
        bits_ok(bits)?;
        put(out, WlInterval(segments::l_n(n, bits)?))
    })
}

/// Midpoint and width of an interval, rounded to `f64`.
///
/// # Safety
/// `h` must be a live interval handle; `mid` and `width` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_interval_get(
    h: *const WlInterval,
    mid: *mut f64,
    width: *mut f64,
) -> WlStatus {
    guard(|| {
        let iv = &get(h)?.0;
        write(mid, iv.mid_f64())?;
        write(width, iv.width_f64())
    })
}

/// Writes 1 if the interval contains the integer `n`, else 0.
///
/// # Safety
/// `h` must be a live interval handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_interval_contains_int(
    h: *const WlInterval,
    n: i64,
    out: *mut i32,
) -> WlStatus {
    guard(|| write(out, i32::from(get(h)?.0.contains_int(n))))
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wl_interval_free(h: *mut WlInterval) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// ---- carry scans ----

/// Scans the carry condition over `[k_min, k_max]`, `k_min ≥ 1`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn wl_carry_scan(
    k_min: u64,
    k_max: u64,
    out: *mut *mut WlCarryReport,
) -> WlStatus {
    guard(|| {
        let chunks = rayon_chunks();
        put(
            out,
            WlCarryReport(exact::scan_carry_parallel(k_min, k_max, chunks)?),
        )
    })
}

fn rayon_chunks() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get() * 4)
}

/// Number of `k` where the carry condition holds.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_carry_violation_count(
    h: *const WlCarryReport,
    out: *mut u64,
) -> WlStatus {
    guard(|| write(out, get(h)?.0.violations.len() as u64))
}

/// The `i`-th `k` where the carry condition holds.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_carry_violation_at(
    h: *const WlCarryReport,
    i: u64,
    out: *mut u64,
) -> WlStatus {
    guard(|| {
        let v = &get(h)?.0.violations;
        let k = usize::try_from(i)
            .ok()
            .and_then(|i| v.get(i))
            .ok_or_else(|| {
                Failure(
                    WlStatus::OutOfRange,
                    format!("index {i} out of range for {} violations", v.len()),
                )
            })?;
        write(out, *k)
    })
}

/// Minimum slack `2^k − m − R` and the `k` where it occurs. The slack is
/// written only if it fits in `i64`; otherwise `OUT_OF_RANGE` is returned.
///
/// # Safety
/// `h` must be a live handle; `slack` and `k` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_carry_min_slack(
    h: *const WlCarryReport,
    slack: *mut i64,
    k: *mut u64,
) -> WlStatus {
    guard(|| {
        let r = &get(h)?.0;
        write(k, r.min_slack_k)?;
        let s = r
            .min_slack
            .to_i64()
            .ok_or_else(|| Failure(WlStatus::OutOfRange, "slack exceeds i64".into()))?;
        write(slack, s)
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wl_carry_report_free(h: *mut WlCarryReport) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// ---- segments ----

/// Certified endpoints of segment `n ≥ 2`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn wl_segment_bounds(
    n: u64,
    bits: u32,
    out: *mut *mut WlSegment,
) -> WlStatus {
    guard(|| {
        bits_ok(bits)?;
        put(out, WlSegment(segments::segment_bounds(n, bits)?))
    })
}

/// Writes 1 if segment `n` straddles an integer (`⌈l_n⌉ = ⌊u_n⌋`), else 0.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_segment_straddles(h: *const WlSegment, out: *mut i32) -> WlStatus {
    guard(|| write(out, i32::from(get(h)?.0.straddles)))
}

/// `⌈l_n⌉` and `⌊u_n⌋`.
///
/// # Safety
/// `h` must be a live handle; `ceil_l` and `floor_u` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_segment_integers(
    h: *const WlSegment,
    ceil_l: *mut i64,
    floor_u: *mut i64,
) -> WlStatus {
    guard(|| {
        let s = &get(h)?.0;
        let small = |v: &num_bigint::BigInt| {
            v.to_i64()
                .ok_or_else(|| Failure(WlStatus::OutOfRange, "integer exceeds i64".into()))
        };
        write(ceil_l, small(&s.ceil_l)?)?;
        write(floor_u, small(&s.floor_u)?)
    })
}

/// Copies of the `u`, `t` and `l` enclosures. Any out pointer may be null to skip it.
///
/// # Safety
/// `h` must be a live handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_segment_intervals(
    h: *const WlSegment,
    u: *mut *mut WlInterval,
    t: *mut *mut WlInterval,
    l: *mut *mut WlInterval,
) -> WlStatus {
    guard(|| {
        let s = &get(h)?.0;
        for (out, iv) in [(u, &s.u), (t, &s.t), (l, &s.l)] {
            if !out.is_null() {
                put(out, WlInterval(iv.clone()))?;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wl_segment_free(h: *mut WlSegment) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// ---- lemmas ----

/// Runs one lemma verifier. Index lemmas use `[lo, hi]`; sampled lemmas use
/// `samples` points from `seed` and ignore the range.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn wl_lemma_run(
    lemma: WlLemma,
    lo: u64,
    hi: u64,
    samples: u64,
    bits: u32,
    seed: u64,
    out: *mut *mut WlLemmaReport,
) -> WlStatus {
    guard(|| {
        bits_ok(bits)?;
        let id = LemmaId::from(lemma);
        let mut cfg = SuiteConfig {
            bits,
            seed,
            ..SuiteConfig::default()
        };
        cfg.set_range(
            id,
            if id.min_index().is_some() {
                (lo, hi)
            } else {
                (0, samples)
            },
        );
        let report = lemmas::run_lemma(id, &cfg).outcome?;
        put(out, WlLemmaReport(report))
    })
}

/// Counts from a lemma report. Any out pointer may be null to skip it.
///
/// # Safety
/// `h` must be a live handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_lemma_counts(
    h: *const WlLemmaReport,
    checked: *mut u64,
    passes: *mut u64,
    failures: *mut u64,
    inconclusive: *mut u64,
) -> WlStatus {
    guard(|| {
        let r = &get(h)?.0;
        for (out, v) in [
            (checked, r.checked),
            (passes, r.passes),
            (failures, r.failures.len() as u64),
            (inconclusive, r.inconclusive.len() as u64),
        ] {
            if !out.is_null() {
                *out = v;
            }
        }
        Ok(())
    })
}

/// Index of the `i`-th failure. Fails with `INVALID_ARGUMENT` for sampled
/// lemmas, whose failures are points rather than indices.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_lemma_failure_index(
    h: *const WlLemmaReport,
    i: u64,
    out: *mut u64,
) -> WlStatus {
    guard(|| {
        let f = &get(h)?.0.failures;
        let w = usize::try_from(i)
            .ok()
            .and_then(|i| f.get(i))
            .ok_or_else(|| {
                Failure(
                    WlStatus::OutOfRange,
                    format!("index {i} out of range for {} failures", f.len()),
                )
            })?;
        match w {
            Witness::Index(n) => write(out, *n),
            Witness::Point(_) => Err(Failure(
                WlStatus::InvalidArgument,
                "failure is a sample point".into(),
            )),
        }
    })
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wl_lemma_report_free(h: *mut WlLemmaReport) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn last_error() -> String {
        let p = wl_last_error_message();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn g_round_trip() {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { wl_g_of_k(4, &mut s) }, WlStatus::Ok);
        assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), "19");
        unsafe { wl_string_free(s) };
        assert!(wl_last_error_message().is_null());
    }

    #[test]
    fn domain_errors_set_message() {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { wl_t_n(1, 64, &mut h) }, WlStatus::Domain);
        assert!(h.is_null());
        assert!(last_error().contains("at least 2"));
        assert_eq!(unsafe { wl_u_n(3, 8, &mut h) }, WlStatus::InvalidArgument);
    }

    #[test]
    fn null_pointers_are_rejected() {
        assert_eq!(
            unsafe { wl_u_n(3, 64, ptr::null_mut()) },
            WlStatus::NullPointer
        );
        let mut m = 0.0;
        let mut w = 0.0;
        assert_eq!(
            unsafe { wl_interval_get(ptr::null(), &mut m, &mut w) },
            WlStatus::NullPointer
        );
        unsafe { wl_interval_free(ptr::null_mut()) };
    }

    #[test]
    fn interval_handles() {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { wl_t_n(2, 128, &mut h) }, WlStatus::Ok);
        let (mut mid, mut width) = (0.0, 0.0);
        assert_eq!(
            unsafe { wl_interval_get(h, &mut mid, &mut width) },
            WlStatus::Ok
        );
        assert!((mid - 2.612_743_940_052_536).abs() < 1e-15);
        assert!(width < 1e-30);
        unsafe { wl_interval_free(h) };
    }

    #[test]
    fn carry_handle() {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { wl_carry_scan(1, 500, &mut h) }, WlStatus::Ok);
        let mut count = 99;
        assert_eq!(
            unsafe { wl_carry_violation_count(h, &mut count) },
            WlStatus::Ok
        );
        assert_eq!(count, 0);
        let (mut slack, mut k) = (-1, 0);
        assert_eq!(
            unsafe { wl_carry_min_slack(h, &mut slack, &mut k) },
            WlStatus::Ok
        );
        assert_eq!((slack, k), (0, 1));
        let mut v = 0;
        assert_eq!(
            unsafe { wl_carry_violation_at(h, 0, &mut v) },
            WlStatus::OutOfRange
        );
        unsafe { wl_carry_report_free(h) };
    }

    #[test]
    fn segment_handle() {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { wl_segment_bounds(57, 128, &mut h) }, WlStatus::Ok);
        let mut s = 1;
        assert_eq!(unsafe { wl_segment_straddles(h, &mut s) }, WlStatus::Ok);
        assert_eq!(s, 0);
        let (mut cl, mut fu) = (0, 0);
        assert_eq!(
            unsafe { wl_segment_integers(h, &mut cl, &mut fu) },
            WlStatus::Ok
        );
        assert_eq!((cl, fu), (11, 10));
        let mut l = ptr::null_mut();
        assert_eq!(
            unsafe { wl_segment_intervals(h, ptr::null_mut(), ptr::null_mut(), &mut l) },
            WlStatus::Ok
        );
        let mut inside = 0;
        assert_eq!(
            unsafe { wl_interval_contains_int(l, 10, &mut inside) },
            WlStatus::Ok
        );
        assert_eq!(inside, 0);
        unsafe {
            wl_interval_free(l);
            wl_segment_free(h);
        }
    }

    #[test]
    fn lemma_handle() {
        let mut h = ptr::null_mut();
        assert_eq!(
            unsafe { wl_lemma_run(WlLemma::MrBound, 2, 10, 0, 64, 0, &mut h) },
            WlStatus::Domain
        );
        assert_eq!(
            unsafe { wl_lemma_run(WlLemma::MrBound, 3, 200, 0, 64, 0, &mut h) },
            WlStatus::Ok
        );
        let (mut checked, mut passes, mut failures) = (0, 0, 9);
        let status = unsafe {
            wl_lemma_counts(h, &mut checked, &mut passes, &mut failures, ptr::null_mut())
        };
        assert_eq!(status, WlStatus::Ok);
        assert_eq!((checked, passes, failures), (198, 198, 0));
        unsafe { wl_lemma_report_free(h) };

        assert_eq!(
            unsafe { wl_lemma_run(WlLemma::HIncreasing, 0, 0, 20, 64, 1, &mut h) },
            WlStatus::Ok
        );
        let mut checked = 0;
        unsafe {
            wl_lemma_counts(
                h,
                &mut checked,
                ptr::null_mut(),
                ptr::null_mut(),
                ptr::null_mut(),
            )
        };
        assert_eq!(checked, 20);
        unsafe { wl_lemma_report_free(h) };
    }
}
