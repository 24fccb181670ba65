#ifndef CUBULATE_H
#define CUBULATE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of a call across the C boundary.
 */
typedef enum CubulateStatus {
  CUBULATE_STATUS_OK = 0,
  /**
   * Malformed or inconsistent input (bad JSON, schema or validation
   * failure, unknown identifier).
   */
  CUBULATE_STATUS_INVALID_INPUT = 1,
  /**
   * A size cap was exceeded; raise `limit` and retry.
   */
  CUBULATE_STATUS_LIMIT_EXCEEDED = 2,
  /**
   * An operation precondition was violated.
   */
  CUBULATE_STATUS_PRECONDITION = 3,
  /**
   * A required pointer argument was null.
   */
  CUBULATE_STATUS_NULL_POINTER = 4,
  /**
   * The input was not valid UTF-8.
   */
  CUBULATE_STATUS_INVALID_UTF8 = 5,
  /**
   * The analysis panicked; this is a bug in the toolkit.
   */
  CUBULATE_STATUS_INTERNAL = 6,
} CubulateStatus;

/**
 * Opaque result handle.
 */
typedef struct CubulateReport CubulateReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Toolkit version as a static string.
 */
const char *cubulate_version(void);

/**
 * Classify a tubular group from its JSON spec. `limit` of 0 keeps the
 * default size caps; `witness` embeds re-verified certificates.
 *
 * # Safety
 * `input` must be a valid NUL-terminated C string; `out` must be valid for
 * writes. The returned handle must be freed with `cubulate_report_free`.
 */
enum CubulateStatus cubulate_tubular_analyze(const char *input,
                                             bool witness,
                                             size_t limit,
                                             struct CubulateReport **out);

/**
 * Classify a free-by-cyclic group from declared train-track JSON.
 *
 * # Safety
 * Same contract as `cubulate_tubular_analyze`.
 */
enum CubulateStatus cubulate_fbc_analyze(const char *input,
                                         bool witness,
                                         size_t limit,
                                         struct CubulateReport **out);

/**
 * Check the median axioms (and metric compatibility) of an algebra.
 *
 * # Safety
 * Same contract as `cubulate_tubular_analyze`.
 */
enum CubulateStatus cubulate_median_verify(const char *input, struct CubulateReport **out);

/**
 * Compute the rank of a median algebra by both routes.
 *
 * # Safety
 * Same contract as `cubulate_tubular_analyze`.
 */
enum CubulateStatus cubulate_median_rank(const char *input,
                                         bool witness,
                                         size_t limit,
                                         struct CubulateReport **out);

/**
 * Validate richly-branching-flat direction data.
 *
 * # Safety
 * Same contract as `cubulate_tubular_analyze`.
 */
enum CubulateStatus cubulate_rbf_validate(const char *input, struct CubulateReport **out);

/**
 * Build the discrete branching-flat model and re-check its invariants.
 *
 * # Safety
 * Same contract as `cubulate_tubular_analyze`.
 */
enum CubulateStatus cubulate_rbf_build(const char *input,
                                       int64_t radius,
                                       uint32_t depth,
                                       size_t limit,
                                       struct CubulateReport **out);

/**
 * Machine-readable report JSON, or NULL if the call failed. Borrowed from
 * the handle.
 *
 * # Safety
 * `report` must be a live handle from this library (or null).
 */
const char *cubulate_report_json(const struct CubulateReport *report);

/**
 * Human-readable report text, or NULL if the call failed. Borrowed from
 * the handle.
 *
 * # Safety
 * `report` must be a live handle from this library (or null).
 */
const char *cubulate_report_text(const struct CubulateReport *report);

/**
 * Error message for a failed call, or NULL on success. Borrowed from the
 * handle.
 *
 * # Safety
 * `report` must be a live handle from this library (or null).
 */
const char *cubulate_report_error(const struct CubulateReport *report);

/**
 * Free a report handle. Null is accepted and ignored.
 *
 * # Safety
 * `report` must be a handle returned by this library, not yet freed.
 */
void cubulate_report_free(struct CubulateReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBULATE_H */
