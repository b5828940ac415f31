#ifndef ORDFILL_H
#define ORDFILL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OrdfillStatus {
  ORDFILL_STATUS_OK = 0,
  ORDFILL_STATUS_VERIFICATION_FAILED = 1,
  ORDFILL_STATUS_INCONCLUSIVE = 2,
  ORDFILL_STATUS_INVALID_ARGUMENT = 3,
  ORDFILL_STATUS_PARSE_ERROR = 4,
  ORDFILL_STATUS_PANIC = 5,
} OrdfillStatus;

typedef enum OrdfillVerdict {
  ORDFILL_VERDICT_NOT_ORDERABLE = 0,
  ORDFILL_VERDICT_UNKNOWN = 1,
} OrdfillVerdict;

/**
 * Opaque manifold handle.
 */
typedef struct OrdfillManifold OrdfillManifold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *ordfill_last_error(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum OrdfillStatus ordfill_manifold_bundled(struct OrdfillManifold **out);

/**
 * Parses manifold data text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for writes.
 */
enum OrdfillStatus ordfill_manifold_parse(const char *text, struct OrdfillManifold **out);

/**
 * # Safety
 * `m` is null or a handle from this library that has not been freed.
 */
void ordfill_manifold_free(struct OrdfillManifold *m);

/**
 * Homology and framing sections as JSON.
 *
 * # Safety
 * `m` must be a live handle and `out_json` valid for writes.
 */
enum OrdfillStatus ordfill_homology(const struct OrdfillManifold *m, char **out_json);

/**
 * Runs the full pipeline at default budgets and writes the bundle JSON.
 *
 * # Safety
 * `m` must be a live handle, `slopes` must point to `n_slopes` valid
 * NUL-terminated strings (or be null when `n_slopes` is 0) and `out_json`
 * must be valid for writes.
 */
enum OrdfillStatus ordfill_pipeline(const struct OrdfillManifold *m,
                                    const char *const *slopes,
                                    size_t n_slopes,
                                    char **out_json);

/**
 * Checks a bundle without searching. `Ok` means every certificate replayed.
 *
 * # Safety
 * `json` must be a NUL-terminated string.
 */
enum OrdfillStatus ordfill_verify_bundle(const char *json);

/**
 * Verdict for the slope `p/q`, after certifying every prerequisite.
 *
 * # Safety
 * `m` must be a live handle and `out` valid for writes.
 */
enum OrdfillStatus ordfill_slope_verdict(const struct OrdfillManifold *m,
                                         int64_t p,
                                         int64_t q,
                                         enum OrdfillVerdict *out);

/**
 * # Safety
 * `s` is null or a string returned by this library that has not been freed.
 */
void ordfill_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDFILL_H */
