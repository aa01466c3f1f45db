#ifndef STRONGBLOCK_H
#define STRONGBLOCK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_NULL_POINTER = 1,
  SB_STATUS_INVALID_ARGUMENT = 2,
  SB_STATUS_BUDGET_EXCEEDED = 3,
  /**
   * The search came back empty.
   */
  SB_STATUS_NOT_FOUND = 4,
  SB_STATUS_IO = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  SB_STATUS_INTERNAL = 6,
} SbStatus;

/**
 * A finite field GF(p^m).
 */
typedef struct SbField SbField;

/**
 * A set of points of a projective space.
 */
typedef struct SbPointSet SbPointSet;

/**
 * The group R* with its ambient field and coset subgeometries.
 */
typedef struct SbRGroup SbRGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The last error on this thread, or null. Valid until the next failing call
 * on the same thread; do not free.
 */
const char *sb_last_error_message(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void sb_string_free(char *s);

/**
 * Builds GF(p^m) with its default primitive modulus.
 *
 * # Safety
 * `out_field` must be a valid pointer.
 */
enum SbStatus sb_field_new(uint32_t p, uint32_t m, struct SbField **out_field);

/**
 * # Safety
 * `field` must come from [`sb_field_new`] and not be freed twice.
 */
void sb_field_free(struct SbField *field);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
uint64_t sb_field_order(const struct SbField *field);

/**
 * `a + b` on element codes.
 *
 * # Safety
 * `field` must be a live handle and `out_code` valid.
 */
enum SbStatus sb_field_add(const struct SbField *field, uint32_t a, uint32_t b, uint32_t *out_code);

/**
 * `a * b` on element codes.
 *
 * # Safety
 * `field` must be a live handle and `out_code` valid.
 */
enum SbStatus sb_field_mul(const struct SbField *field, uint32_t a, uint32_t b, uint32_t *out_code);

/**
 * Builds R* for (q, k) inside GF(q^(k(k-1))) together with the coset
 * subgeometries of PG(k-1, q^(k-1)).
 *
 * # Safety
 * `out_rgroup` must be a valid pointer.
 */
enum SbStatus sb_rgroup_new(uint64_t q, uint32_t k, struct SbRGroup **out_rgroup);

/**
 * # Safety
 * `rgroup` must come from [`sb_rgroup_new`] and not be freed twice.
 */
void sb_rgroup_free(struct SbRGroup *rgroup);

/**
 * Number of cosets of R*, i.e. of subgeometries. 0 for a null handle.
 *
 * # Safety
 * `rgroup` must be null or a live handle.
 */
uint32_t sb_rgroup_cosets(const struct SbRGroup *rgroup);

/**
 * Samples an R-independent (k-1)-tuple with `seed` and returns the union of
 * its subgeometries. `SB_STATUS_NOT_FOUND` if `max_iters` samples all fail.
 *
 * # Safety
 * `rgroup` must be a live handle and `out_set` valid.
 */
enum SbStatus sb_union_from_seed(const struct SbRGroup *rgroup,
                                 uint64_t seed,
                                 uint64_t max_iters,
                                 struct SbPointSet **out_set);

/**
 * Parses a point set from its JSON form.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out_set` valid.
 */
enum SbStatus sb_pointset_from_json(const char *json, struct SbPointSet **out_set);

/**
 * Serializes a point set; free the result with [`sb_string_free`].
 *
 * # Safety
 * `set` must be a live handle and `out_json` valid.
 */
enum SbStatus sb_pointset_to_json(const struct SbPointSet *set, char **out_json);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
uint64_t sb_pointset_len(const struct SbPointSet *set);

/**
 * # Safety
 * `set` must come from this library and not be freed twice.
 */
void sb_pointset_free(struct SbPointSet *set);

/**
 * Exhaustive strong blocking check. On a negative answer `out_witness` gets
 * the canonical index of the first failing hyperplane, else -1.
 *
 * # Safety
 * `set` must be a live handle; the out pointers must be valid.
 */
enum SbStatus sb_verify_strong(const struct SbPointSet *set,
                               bool *out_strong,
                               int64_t *out_witness);

/**
 * Whether the code with the set's points as columns is minimal.
 *
 * # Safety
 * `set` must be a live handle and `out_minimal` valid.
 */
enum SbStatus sb_check_minimal(const struct SbPointSet *set, bool *out_minimal);

/**
 * Runs the full pipeline and returns its JSON report; free it with
 * [`sb_string_free`].
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum SbStatus sb_pipeline_json(uint64_t q, uint32_t k, uint64_t seed, char **out_json);

/**
 * Whether |B(4, q)| is certified to lie outside every small-blocking-set
 * interval, for odd prime powers q.
 *
 * # Safety
 * `out_certified` must be a valid pointer.
 */
enum SbStatus sb_bounds_certify(uint64_t q, bool *out_certified);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRONGBLOCK_H */
