#ifndef PQRA_H
#define PQRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum PqraStatus {
  PQRA_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PQRA_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  PQRA_STATUS_INVALID_UTF8 = 2,
  /**
   * No metric profile or bundled program has the given name.
   */
  PQRA_STATUS_UNKNOWN_NAME = 3,
  PQRA_STATUS_PARSE_ERROR = 4,
  PQRA_STATUS_TYPE_ERROR = 5,
  /**
   * Running the program failed (missing parameter, stuck term, ...).
   */
  PQRA_STATUS_EVAL_ERROR = 6,
  /**
   * The program ran, but the measured cost exceeded the inferred bound.
   */
  PQRA_STATUS_BOUND_VIOLATED = 7,
  /**
   * An internal error; the library state is unaffected.
   */
  PQRA_STATUS_INTERNAL = 8,
} PqraStatus;

/**
 * A program that has passed the checker under one profile.
 */
typedef struct PqraChecked PqraChecked;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread (empty if none).
 * The pointer stays valid until the next failing call on this thread.
 */
const char *pqra_last_error(void);

/**
 * Parses and checks `source` under the profile named `profile`
 * (`width`, `gatecount`, `gatecount_all`, `tcount`, `qubits`, `bits`
 * or `depth`). On success `*out` receives a new handle.
 *
 * # Safety
 * `source` and `profile` must be null or NUL-terminated strings; `out`
 * must be null or valid for writes.
 */
enum PqraStatus pqra_check(const char *source, const char *profile, struct PqraChecked **out);

/**
 * Copies the source of a bundled example program into `*out`.
 *
 * # Safety
 * `name` must be null or a NUL-terminated string; `out` must be null or
 * valid for writes.
 */
enum PqraStatus pqra_corpus_source(const char *name, char **out);

/**
 * Writes the inferred type of `main` into `*out`.
 *
 * # Safety
 * `checked` must be null or a live handle; `out` must be null or valid
 * for writes.
 */
enum PqraStatus pqra_checked_type(const struct PqraChecked *checked, char **out);

/**
 * Writes the effect of evaluating `main` itself into `*out`.
 *
 * # Safety
 * As for [`pqra_checked_type`].
 */
enum PqraStatus pqra_checked_effect(const struct PqraChecked *checked, char **out);

/**
 * Runs `main` with the index parameters `names[k] = values[k]` and
 * compares the inferred bound with the measured cost. Under the depth
 * profile both numbers are the worst case over the output wires.
 * Returns [`PqraStatus::BoundViolated`] (with both numbers written) when
 * the measurement exceeds the bound.
 *
 * # Safety
 * `names` and `values` must each point to `len` elements (or be null
 * when `len` is zero); `bound` and `measured` must be null or valid for
 * writes.
 */
enum PqraStatus pqra_checked_verify(const struct PqraChecked *checked,
                                    const char *const *names,
                                    const uint64_t *values,
                                    size_t len,
                                    uint64_t *bound,
                                    uint64_t *measured);

/**
 * Releases a handle returned by [`pqra_check`]. Null is ignored.
 *
 * # Safety
 * `checked` must be null or a handle not yet freed.
 */
void pqra_checked_free(struct PqraChecked *checked);

/**
 * Releases a string returned through an out-parameter. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void pqra_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PQRA_H */
