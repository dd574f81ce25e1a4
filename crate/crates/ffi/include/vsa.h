#ifndef VSA_H
#define VSA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VsaStatus {
  VSA_STATUS_OK = 0,
  VSA_STATUS_NULL_POINTER = 1,
  VSA_STATUS_INVALID_UTF8 = 2,
  VSA_STATUS_DOMAIN = 3,
  VSA_STATUS_ASSERTION = 4,
  VSA_STATUS_TERMINATION_GUARD = 5,
  VSA_STATUS_PARSE = 6,
  VSA_STATUS_CACHE = 7,
  VSA_STATUS_IO = 8,
  /**
   * A verification run finished but some criterion failed.
   */
  VSA_STATUS_FAILED = 9,
  VSA_STATUS_INTERNAL = 10,
} VsaStatus;

/**
 * Quotient representatives for one difference `N`, together with the
 * algebra they were computed in.
 */
typedef struct VsaGenerators VsaGenerators;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *vsa_last_error(void);

/**
 * Releases a string returned through an `out` parameter. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void vsa_string_free(char *s);

/**
 * JSON object with the Pascal matrix, `L_N(m)`, `S_N(m)` and `det S_N(m)`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum VsaStatus vsa_matrix_json(uint32_t n_diff, int64_t m, char **out);

/**
 * Straightening coefficients as a JSON array of `"p/q"` strings.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum VsaStatus vsa_coeffs_json(uint32_t n_diff, int64_t n, char **out);

/**
 * Builds the quotient representatives up to `max_weight`. When `cache_path`
 * is not null the set is read from, or written to, that file.
 *
 * # Safety
 * `cache_path` must be null or a NUL-terminated string; `out` must be a valid
 * pointer to writable storage.
 */
enum VsaStatus vsa_generators_new(uint32_t n_diff,
                                  int64_t max_weight,
                                  const char *cache_path,
                                  struct VsaGenerators **out);

/**
 * Releases a generator handle. Null is ignored.
 *
 * # Safety
 * `g` must come from [`vsa_generators_new`] and must not be used afterwards.
 */
void vsa_generators_free(struct VsaGenerators *g);

/**
 * Number of representatives of weight `weight`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum VsaStatus vsa_generators_count(const struct VsaGenerators *g, int64_t weight, size_t *out);

/**
 * The generator set in the cache file format.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum VsaStatus vsa_generators_json(const struct VsaGenerators *g, char **out);

/**
 * Normal form of `expression`. Writes `{"input", "output"}` JSON, or the full
 * rewrite trace when `with_trace` is set.
 *
 * # Safety
 * `g` must be a live handle, `expression` a NUL-terminated string and `out`
 * a valid pointer.
 */
enum VsaStatus vsa_straighten(const struct VsaGenerators *g,
                              const char *expression,
                              bool with_trace,
                              char **out);

/**
 * Rank of the normal monomials of weight `weight` and `dim V_weight`.
 *
 * # Safety
 * `g` must be a live handle; `rank` and `dim` valid pointers.
 */
enum VsaStatus vsa_span_check(const struct VsaGenerators *g,
                              int64_t weight,
                              size_t *rank,
                              size_t *dim);

/**
 * Runs a verification suite (`combinatorics`, `algebra`, `identities`,
 * `rewrite` or `all`) and writes the per-criterion reports as JSON. Returns
 * `Failed` when some criterion did not pass; the report is written anyway.
 *
 * # Safety
 * `suite` must be a NUL-terminated string and `out` a valid pointer.
 */
enum VsaStatus vsa_verify(const char *suite, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VSA_H */
