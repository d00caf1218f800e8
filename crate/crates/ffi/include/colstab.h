#ifndef COLSTAB_H
#define COLSTAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum ColstabStatus {
  COLSTAB_STATUS_OK = 0,
  COLSTAB_STATUS_NULL_POINTER = 1,
  COLSTAB_STATUS_INVALID_UTF8 = 2,
  COLSTAB_STATUS_PARSE_ERROR = 3,
  COLSTAB_STATUS_RING_MISMATCH = 4,
  COLSTAB_STATUS_NOT_STABILIZING = 5,
  COLSTAB_STATUS_NOT_INVERTIBLE = 6,
  COLSTAB_STATUS_NOT_IN_SCHEME = 7,
  COLSTAB_STATUS_OBSTRUCTED = 8,
  COLSTAB_STATUS_DOMAIN_ERROR = 9,
  COLSTAB_STATUS_PANIC = 10,
} ColstabStatus;

typedef enum ColstabMode {
  COLSTAB_MODE_POLYNOMIAL = 0,
  COLSTAB_MODE_LAURENT = 1,
} ColstabMode;

/**
 * A matrix over a ring.
 */
typedef struct ColstabMatrix ColstabMatrix;

/**
 * A ring element.
 */
typedef struct ColstabPoly ColstabPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *colstab_last_error(void);

/**
 * Free a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void colstab_string_free(char *s);

/**
 * Parse a polynomial over the ring with the given mode and number of
 * variables (integer coefficients).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ColstabStatus colstab_poly_parse(enum ColstabMode mode,
                                      uint32_t nvars,
                                      const char *text,
                                      struct ColstabPoly **out);

/**
 * Canonical text of a polynomial.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum ColstabStatus colstab_poly_to_string(const struct ColstabPoly *p, char **out);

/**
 * `*out = a + b`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum ColstabStatus colstab_poly_add(const struct ColstabPoly *a,
                                    const struct ColstabPoly *b,
                                    struct ColstabPoly **out);

/**
 * `*out = a * b`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum ColstabStatus colstab_poly_mul(const struct ColstabPoly *a,
                                    const struct ColstabPoly *b,
                                    struct ColstabPoly **out);

/**
 * Whether `p` is invertible in its ring.
 *
 * # Safety
 * `p` must be a live handle or NULL.
 */
bool colstab_poly_is_unit(const struct ColstabPoly *p);

/**
 * # Safety
 * `p` must come from this library and not have been freed. NULL is ignored.
 */
void colstab_poly_free(struct ColstabPoly *p);

/**
 * Read a JSON matrix document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ColstabStatus colstab_matrix_from_json(const char *json, struct ColstabMatrix **out);

/**
 * Canonical JSON document of a matrix.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum ColstabStatus colstab_matrix_to_json(const struct ColstabMatrix *m, char **out);

/**
 * # Safety
 * `m` must come from this library and not have been freed. NULL is ignored.
 */
void colstab_matrix_free(struct ColstabMatrix *m);

/**
 * `Ok` iff `m` fixes the column `(c1, c2, c3)` and has a unit determinant;
 * otherwise `NotStabilizing` or `NotInvertible`.
 *
 * # Safety
 * `m` must be a live handle.
 */
enum ColstabStatus colstab_check_stab(const struct ColstabMatrix *m);

/**
 * Residues as `{"alpha":..,"beta":..,"gamma":..,"delta":..}`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum ColstabStatus colstab_residues_json(const struct ColstabMatrix *m, char **out);

/**
 * The 2×2 image of a stabilizer.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum ColstabStatus colstab_rho(const struct ColstabMatrix *m, struct ColstabMatrix **out);

/**
 * Preimage report for a 2×2 scheme matrix, as JSON. Returns `Obstructed`
 * (with the report still written) when no preimage was found within
 * `max_word_len`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum ColstabStatus colstab_preimage_json(const struct ColstabMatrix *m,
                                         uint32_t max_word_len,
                                         char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLSTAB_H */
