#ifndef OPENFOL_H
#define OPENFOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. The first four match the command line's exit codes.
 */
typedef enum OpenfolStatus {
  /**
   * Success: accepted, valid up to the bound, or sound up to the bound.
   */
  OPENFOL_STATUS_OK = 0,
  /**
   * The logic answered no: rejected, countermodel or counterexample.
   */
  OPENFOL_STATUS_REJECTED = 1,
  /**
   * Unparsable text, unknown rule, bad bound or invalid UTF-8.
   */
  OPENFOL_STATUS_INVALID_INPUT = 2,
  OPENFOL_STATUS_INCONCLUSIVE = 3,
  OPENFOL_STATUS_NULL_POINTER = 4,
  /**
   * A bug: the library panicked.
   */
  OPENFOL_STATUS_INTERNAL = 5,
} OpenfolStatus;

typedef enum OpenfolMode {
  /**
   * Use the script's `pragma mode`, else open.
   */
  OPENFOL_MODE_FROM_SCRIPT = -1,
  OPENFOL_MODE_CLASSICAL = 0,
  OPENFOL_MODE_OPEN = 1,
  OPENFOL_MODE_MINIMAL = 2,
} OpenfolMode;

typedef enum OpenfolProfile {
  OPENFOL_PROFILE_TOTAL = 0,
  OPENFOL_PROFILE_NULL_STRICT = 1,
  OPENFOL_PROFILE_PARTIAL = 2,
  OPENFOL_PROFILE_NULL_PADDED = 3,
} OpenfolProfile;

/**
 * A parsed proof script.
 */
typedef struct OpenfolScript OpenfolScript;

/**
 * The kernel's verdict on a script.
 */
typedef struct OpenfolVerdict OpenfolVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a proof script. On success `*out` receives a handle to release
 * with `openfol_script_free`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OpenfolStatus openfol_script_parse(const char *text, struct OpenfolScript **out);

/**
 * # Safety
 * `script` must come from `openfol_script_parse` and not be freed twice.
 */
void openfol_script_free(struct OpenfolScript *script);

/**
 * Check a script. Returns `OK` if accepted and `REJECTED` otherwise; in
 * both cases `*out` receives a verdict handle.
 *
 * # Safety
 * `script` must be a live handle and `out` a valid pointer.
 */
enum OpenfolStatus openfol_check(const struct OpenfolScript *script,
                                 enum OpenfolMode mode,
                                 struct OpenfolVerdict **out);

/**
 * Whether the verdict accepts the proof. False for a null handle.
 *
 * # Safety
 * `verdict` must be null or a live handle.
 */
bool openfol_verdict_accepted(const struct OpenfolVerdict *verdict);

/**
 * The verdict as JSON: mode, acceptance, per-line results and the
 * established sequent.
 *
 * # Safety
 * `verdict` must be a live handle and `out` a valid pointer.
 */
enum OpenfolStatus openfol_verdict_json(const struct OpenfolVerdict *verdict, char **out);

/**
 * # Safety
 * `verdict` must come from `openfol_check` and not be freed twice.
 */
void openfol_verdict_free(struct OpenfolVerdict *verdict);

/**
 * Search for a countermodel to `premises |- conclusion`. The status is
 * `OK` (valid up to the bound), `REJECTED` (countermodel) or
 * `INCONCLUSIVE`; `*out` receives the result as JSON.
 *
 * # Safety
 * `premises` must point to `premise_count` NUL-terminated strings (it may
 * be null when the count is 0); `conclusion` must be NUL-terminated.
 */
enum OpenfolStatus openfol_search_json(const char *const *premises,
                                       size_t premise_count,
                                       const char *conclusion,
                                       enum OpenfolProfile profile,
                                       size_t max_size,
                                       char **out);

/**
 * Audit one rule by name, or every audited rule when `rule` is null.
 * `*out` receives a JSON array of reports.
 *
 * # Safety
 * `rule` must be null or NUL-terminated; `out` a valid pointer.
 */
enum OpenfolStatus openfol_audit_json(const char *rule,
                                      enum OpenfolProfile profile,
                                      size_t max_size,
                                      char **out);

/**
 * Parse a formula and print it canonically.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` a valid pointer.
 */
enum OpenfolStatus openfol_format_formula(const char *text, char **out);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next openfol call on the thread; do not free it.
 */
const char *openfol_last_error_message(void);

/**
 * Release a string returned through an `out` parameter.
 *
 * # Safety
 * `s` must be null or a string from this library, freed once.
 */
void openfol_string_free(char *s);

/**
 * Library version, static.
 */
const char *openfol_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPENFOL_H */
