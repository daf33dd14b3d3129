#ifndef HYPERNORM_H
#define HYPERNORM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HnStatus {
  HN_STATUS_OK = 0,
  HN_STATUS_NULL_POINTER = 1,
  HN_STATUS_INVALID_ARGUMENT = 2,
  HN_STATUS_JSON = 3,
  HN_STATUS_BUDGET = 4,
  HN_STATUS_DIMENSION_MISMATCH = 5,
  HN_STATUS_NEGATIVE_WEIGHT = 6,
  HN_STATUS_ZERO_SIZE = 7,
  HN_STATUS_REJECTED = 8,
  HN_STATUS_IO = 9,
  HN_STATUS_PANIC = 10,
} HnStatus;

typedef enum HnVerdict {
  HN_VERDICT_TYPE_ONE = 0,
  HN_VERDICT_TYPE_TWO = 1,
  HN_VERDICT_NOT_SEMI_NORMING = 2,
} HnVerdict;

/**
 * Opaque function handle.
 */
typedef struct HnFunction HnFunction;

/**
 * Opaque pair handle.
 */
typedef struct HnPair HnPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *hn_version(void);

/**
 * Message for the last failed call on this thread, or "" after a success.
 */
const char *hn_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void hn_string_free(char *s);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out_pair` must be writable.
 */
enum HnStatus hn_pair_from_json(const char *json, struct HnPair **out_pair);

/**
 * Canonical JSON of a pair; free the result with `hn_string_free`.
 *
 * # Safety
 * `pair` must be a live handle; `out_json` must be writable.
 */
enum HnStatus hn_pair_to_json(const struct HnPair *pair, char **out_json);

/**
 * # Safety
 * `pair` must come from this library or be null; it is invalid afterwards.
 */
void hn_pair_free(struct HnPair *pair);

/**
 * `|H| = sum(alpha + beta)`.
 *
 * # Safety
 * `pair` must be a live handle; `out_size` must be writable.
 */
enum HnStatus hn_pair_size(const struct HnPair *pair, double *out_size);

/**
 * # Safety
 * `out_pair` must be writable.
 */
enum HnStatus hn_make_lp(double p, struct HnPair **out_pair);

/**
 * # Safety
 * `out_pair` must be writable.
 */
enum HnStatus hn_make_gowers(size_t k, struct HnPair **out_pair);

/**
 * Schatten pair for the even `exponent` 2m.
 *
 * # Safety
 * `out_pair` must be writable.
 */
enum HnStatus hn_make_schatten(size_t exponent, struct HnPair **out_pair);

/**
 * # Safety
 * `dims` must point to `k` values; `out_pair` must be writable.
 */
enum HnStatus hn_make_complete(double p, const size_t *dims, size_t k, struct HnPair **out_pair);

/**
 * Verdict of the semi-norming screen; `out_s` receives the Type I
 * parameter (NaN otherwise). Either output may be null.
 *
 * # Safety
 * `pair` must be a live handle.
 */
enum HnStatus hn_pair_classify(const struct HnPair *pair,
                               enum HnVerdict *out_verdict,
                               double *out_s);

/**
 * Full classification report as JSON; free with `hn_string_free`.
 *
 * # Safety
 * `pair` must be a live handle; `out_json` must be writable.
 */
enum HnStatus hn_pair_classify_json(const struct HnPair *pair, char **out_json);

/**
 * Function on `n` points with the given weights (null = counting
 * measure). `re` and `im` hold `n^k` values in row-major order; `im` may
 * be null for a real function.
 *
 * # Safety
 * Pointers must reference arrays of the stated lengths.
 */
enum HnStatus hn_function_new(size_t n,
                              size_t k,
                              const double *weights,
                              const double *re,
                              const double *im,
                              struct HnFunction **out_function);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out_function` must be writable.
 */
enum HnStatus hn_function_from_json(const char *json, struct HnFunction **out_function);

/**
 * # Safety
 * `f` must come from this library or be null; it is invalid afterwards.
 */
void hn_function_free(struct HnFunction *f);

/**
 * `integral f^H` by the planned contraction. Budgets follow
 * `HYPERNORM_BUDGET`.
 *
 * # Safety
 * Handles must be live; outputs must be writable.
 */
enum HnStatus hn_integrate(const struct HnPair *pair,
                           const struct HnFunction *f,
                           double *out_re,
                           double *out_im);

/**
 * `|integral f^H|^{1/|H|}`.
 *
 * # Safety
 * Handles must be live; `out_norm` must be writable.
 */
enum HnStatus hn_norm(const struct HnPair *pair, const struct HnFunction *f, double *out_norm);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERNORM_H */
