#ifndef DLVSYM_H
#define DLVSYM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Manifold selector for invariance checks.
 */
typedef enum DlvKind {
  DLV_KIND_LIE = 0,
  DLV_KIND_FIRST_TYPE_U = 1,
  DLV_KIND_FIRST_TYPE_V = 2,
  DLV_KIND_FIRST_TYPE_W = 3,
  DLV_KIND_NON_CLASSICAL = 4,
} DlvKind;

/**
 * Result codes.
 */
typedef enum DlvStatus {
  DLV_STATUS_OK = 0,
  DLV_STATUS_NULL_POINTER = 1,
  DLV_STATUS_INVALID_UTF8 = 2,
  DLV_STATUS_SYNTAX = 3,
  DLV_STATUS_UNKNOWN_IDENTIFIER = 4,
  DLV_STATUS_INVALID_SYSTEM = 5,
  DLV_STATUS_INVALID_FIELD = 6,
  DLV_STATUS_CASE_NOT_FOUND = 7,
  DLV_STATUS_DEGENERATE = 8,
  DLV_STATUS_CONFIG = 9,
  DLV_STATUS_EVALUATION = 10,
  DLV_STATUS_OTHER = 11,
  DLV_STATUS_PANIC = 12,
} DlvStatus;

/**
 * A point-symmetry operator.
 */
typedef struct DlvField DlvField;

/**
 * A reaction-diffusion system.
 */
typedef struct DlvSystem DlvSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *dlv_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void dlv_string_free(char *s);

/**
 * Parse a system definition (`key = expression` lines).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` a valid pointer.
 */
enum DlvStatus dlv_system_parse(const char *text, struct DlvSystem **out);

/**
 * # Safety
 * `sys` must come from [`dlv_system_parse`] or be null.
 */
void dlv_system_free(struct DlvSystem *sys);

/**
 * Parse an operator `xi0; xi1; eta1; eta2; eta3`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` a valid pointer.
 */
enum DlvStatus dlv_field_parse(const char *text, struct DlvField **out);

/**
 * # Safety
 * `field` must come from [`dlv_field_parse`] or be null.
 */
void dlv_field_free(struct DlvField *field);

/**
 * Invariance check. `passed` receives 1 or 0; when `witness` is non-null
 * it receives a description of the first nonzero jet coefficient, or null
 * when the check passes.
 *
 * # Safety
 * Handles must be live; `passed` valid; `witness` null or valid.
 */
enum DlvStatus dlv_check(const struct DlvSystem *sys,
                         const struct DlvField *field,
                         enum DlvKind kind,
                         int32_t *passed,
                         char **witness);

/**
 * Determining equations, one `expr = 0` per line.
 *
 * # Safety
 * `sys` must be live; `out` valid.
 */
enum DlvStatus dlv_detgen(const struct DlvSystem *sys, enum DlvKind kind, char **out);

/**
 * Verify catalog rows; `table == 0` means every table and `case == 0`
 * every case. With `seed_count == 0` rows are checked with symbolic
 * parameters, otherwise once per seed. The JSON report goes to `json`
 * (when non-null) and the number of expectation mismatches to
 * `mismatches`.
 *
 * # Safety
 * `seeds` must hold `seed_count` values; out pointers valid or null.
 */
enum DlvStatus dlv_verify_catalog(uint32_t table,
                                  uint32_t case_,
                                  const uint64_t *seeds,
                                  uintptr_t seed_count,
                                  char **json,
                                  uintptr_t *mismatches);

/**
 * Number of rows in a table (0 for an unknown table).
 */
uintptr_t dlv_catalog_size(uint32_t table);

/**
 * The reduction example on the unit square: parameters from `params`
 * (`key = value` lines; null for the defaults), a `nt x nx` grid. Writes
 * whether the symbolic residual vanishes and the numeric maximum.
 *
 * # Safety
 * `params` null or NUL-terminated; out pointers valid.
 */
enum DlvStatus dlv_reduce_example(const char *params,
                                  uintptr_t nt,
                                  uintptr_t nx,
                                  int32_t *symbolic_zero,
                                  double *max_residual);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DLVSYM_H */
