#ifndef WARING_LAB_H
#define WARING_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WlStatus {
  WL_STATUS_OK = 0,
  WL_STATUS_NULL_POINTER = 1,
  WL_STATUS_INVALID_ARGUMENT = 2,
  WL_STATUS_DOMAIN = 3,
  WL_STATUS_PRECISION_EXHAUSTED = 4,
  WL_STATUS_OUT_OF_RANGE = 5,
  WL_STATUS_PANIC = 6,
} WlStatus;

typedef enum WlLemma {
  WL_LEMMA_LEMMA1 = 0,
  WL_LEMMA_CEIL_TRANSFER = 1,
  WL_LEMMA_BASIC_BOUND = 2,
  WL_LEMMA_BINOMIAL_Q = 3,
  WL_LEMMA_UPPER_ENDPOINT = 4,
  WL_LEMMA_LOWER_ENDPOINT = 5,
  WL_LEMMA_MR_BOUND = 6,
  WL_LEMMA_X_PRIME_POSITIVE = 7,
  WL_LEMMA_H_INCREASING = 8,
} WlLemma;

/**
 * Result of a carry-condition scan.
 */
typedef struct WlCarryReport WlCarryReport;

/**
 * Certified enclosure of a real number.
 */
typedef struct WlInterval WlInterval;

/**
 * Result of one lemma verifier.
 */
typedef struct WlLemmaReport WlLemmaReport;

/**
 * Certified endpoints of one comb segment.
 */
typedef struct WlSegment WlSegment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. The pointer stays valid until
 * the next call into this library from the same thread.
 */
const char *wl_last_error_message(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library that has not been freed.
 */
void wl_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *wl_version(void);

/**
 * `g(k)` as a decimal string. Free it with `wl_string_free`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum WlStatus wl_g_of_k(uint64_t k, char **out);

/**
 * `u_n = ln(n+1)/ln(3/2)`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum WlStatus wl_u_n(uint64_t n, uint32_t bits, struct WlInterval **out);

/**
 * The root `t_n ∈ (n, n+1)` of `t^q (n + 1 − t) = n`, for `n ≥ 2`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum WlStatus wl_t_n(uint64_t n, uint32_t bits, struct WlInterval **out);

/**
 * `l_n = ln(t_n)/ln(3/2)`, for `n ≥ 2`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum WlStatus wl_l_n(uint64_t n, uint32_t bits, struct WlInterval **out);

/**
 * Midpoint and width of an interval, rounded to `f64`.
 *
 * # Safety
 * `h` must be a live interval handle; `mid` and `width` must be writable.
 */
enum WlStatus wl_interval_get(const struct WlInterval *h, double *mid, double *width);

/**
 * Writes 1 if the interval contains the integer `n`, else 0.
 *
 * # Safety
 * `h` must be a live interval handle; `out` must be writable.
 */
enum WlStatus wl_interval_contains_int(const struct WlInterval *h, int64_t n, int32_t *out);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void wl_interval_free(struct WlInterval *h);

/**
 * Scans the carry condition over `[k_min, k_max]`, `k_min ≥ 1`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum WlStatus wl_carry_scan(uint64_t k_min, uint64_t k_max, struct WlCarryReport **out);

/**
 * Number of `k` where the carry condition holds.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_carry_violation_count(const struct WlCarryReport *h, uint64_t *out);

/**
 * The `i`-th `k` where the carry condition holds.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_carry_violation_at(const struct WlCarryReport *h, uint64_t i, uint64_t *out);

/**
 * Minimum slack `2^k − m − R` and the `k` where it occurs. The slack is
 * written only if it fits in `i64`; otherwise `OUT_OF_RANGE` is returned.
 *
 * # Safety
 * `h` must be a live handle; `slack` and `k` must be writable.
 */
enum WlStatus wl_carry_min_slack(const struct WlCarryReport *h, int64_t *slack, uint64_t *k);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void wl_carry_report_free(struct WlCarryReport *h);

/**
 * Certified endpoints of segment `n ≥ 2`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum WlStatus wl_segment_bounds(uint64_t n, uint32_t bits, struct WlSegment **out);

/**
 * Writes 1 if segment `n` straddles an integer (`⌈l_n⌉ = ⌊u_n⌋`), else 0.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_segment_straddles(const struct WlSegment *h, int32_t *out);

/**
 * `⌈l_n⌉` and `⌊u_n⌋`.
 *
 * # Safety
 * `h` must be a live handle; `ceil_l` and `floor_u` must be writable.
 */
enum WlStatus wl_segment_integers(const struct WlSegment *h, int64_t *ceil_l, int64_t *floor_u);

/**
 * Copies of the `u`, `t` and `l` enclosures. Any out pointer may be null to skip it.
 *
 * # Safety
 * `h` must be a live handle; non-null out pointers must be writable.
 */
enum WlStatus wl_segment_intervals(const struct WlSegment *h,
                                   struct WlInterval **u,
                                   struct WlInterval **t,
                                   struct WlInterval **l);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void wl_segment_free(struct WlSegment *h);

/**
 * Runs one lemma verifier. Index lemmas use `[lo, hi]`; sampled lemmas use
 * `samples` points from `seed` and ignore the range.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum WlStatus wl_lemma_run(enum WlLemma lemma,
                           uint64_t lo,
                           uint64_t hi,
                           uint64_t samples,
                           uint32_t bits,
                           uint64_t seed,
                           struct WlLemmaReport **out);

/**
 * Counts from a lemma report. Any out pointer may be null to skip it.
 *
 * # Safety
 * `h` must be a live handle; non-null out pointers must be writable.
 */
enum WlStatus wl_lemma_counts(const struct WlLemmaReport *h,
                              uint64_t *checked,
                              uint64_t *passes,
                              uint64_t *failures,
                              uint64_t *inconclusive);

/**
 * Index of the `i`-th failure. Fails with `INVALID_ARGUMENT` for sampled
 * lemmas, whose failures are points rather than indices.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum WlStatus wl_lemma_failure_index(const struct WlLemmaReport *h, uint64_t i, uint64_t *out);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void wl_lemma_report_free(struct WlLemmaReport *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WARING_LAB_H */
