#ifndef GPOLY_H
#define GPOLY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Largest C(n, d) a profile or facet query will enumerate.
 */
#define GPOLY_MAX_SUBSETS 200000

typedef enum GpolyStatus {
  GPOLY_STATUS_OK = 0,
  GPOLY_STATUS_NULL_POINTER = 1,
  GPOLY_STATUS_INVALID_PARAMETER = 2,
  GPOLY_STATUS_DIMENSION_MISMATCH = 3,
  GPOLY_STATUS_DOMAIN = 4,
  GPOLY_STATUS_DEGENERATE = 5,
  GPOLY_STATUS_NUMERICAL = 6,
  GPOLY_STATUS_RESOURCE_CAP = 7,
  GPOLY_STATUS_BUFFER_TOO_SMALL = 8,
  GPOLY_STATUS_PANIC = 9,
} GpolyStatus;

typedef enum GpolySign {
  GPOLY_SIGN_MINUS = 0,
  GPOLY_SIGN_PLUS = 1,
} GpolySign;

/**
 * Opaque handle to a point set.
 */
typedef struct GpolyPointSet GpolyPointSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next gpoly call on the same thread.
 */
const char *gpoly_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gpoly_version(void);

/**
 * Sample `n` standard Gaussian points in dimension `d` from stream (seed, 0).
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum GpolyStatus gpoly_point_set_gaussian(uint64_t seed,
                                          size_t n,
                                          size_t d,
                                          struct GpolyPointSet **out);

/**
 * Copy `n * d` row-major coordinates into a new point set.
 *
 * # Safety
 * `coords` must point to `n * d` readable doubles and `out` must be valid
 * for a pointer write.
 */
enum GpolyStatus gpoly_point_set_from_coords(const double *coords,
                                             size_t n,
                                             size_t d,
                                             struct GpolyPointSet **out);

/**
 * Release a point set. Null is accepted.
 *
 * # Safety
 * `ps` must come from a gpoly constructor and not have been freed.
 */
void gpoly_point_set_free(struct GpolyPointSet *ps);

/**
 * Write the number of points and the dimension.
 *
 * # Safety
 * `ps` must be a live handle; the out pointers must be writable.
 */
enum GpolyStatus gpoly_point_set_shape(const struct GpolyPointSet *ps, size_t *n, size_t *d);

/**
 * Copy the row-major coordinates into `buf`, which must hold `n * d` doubles.
 *
 * # Safety
 * `ps` must be a live handle and `buf` writable for `len` doubles.
 */
enum GpolyStatus gpoly_point_set_coords(const struct GpolyPointSet *ps, double *buf, size_t len);

/**
 * Fill `e[0..=n-d]` with the k-facet counts. `len` must be at least
 * `n - d + 1`. `balanced` receives the number of subsets with equal sides.
 *
 * # Safety
 * `ps` must be a live handle, `e` writable for `len` values and `balanced`
 * writable.
 */
enum GpolyStatus gpoly_kfacet_profile(const struct GpolyPointSet *ps,
                                      uint64_t *e,
                                      size_t len,
                                      uint64_t *balanced);

/**
 * Number of facets of the convex hull.
 *
 * # Safety
 * `ps` must be a live handle and `out` writable.
 */
enum GpolyStatus gpoly_facet_count(const struct GpolyPointSet *ps, uint64_t *out);

/**
 * Number of unordered pairs of vertex-disjoint facets.
 *
 * # Safety
 * `ps` must be a live handle and `out` writable.
 */
enum GpolyStatus gpoly_estranged_pair_count(const struct GpolyPointSet *ps, uint64_t *out);

/**
 * Exact expected number of k-facets for n Gaussian points in dimension d.
 *
 * # Safety
 * `out` must be writable.
 */
enum GpolyStatus gpoly_kfacet_expectation_exact(size_t n, size_t d, size_t k, double *out);

/**
 * Exponential growth base for n = alpha * d points and k = r * (n - d).
 *
 * # Safety
 * `out` must be writable.
 */
enum GpolyStatus gpoly_growth_base(double alpha, double r, double *out);

/**
 * Maximised estranged-pair constant for the given sign pattern.
 *
 * # Safety
 * `out` must be writable.
 */
enum GpolyStatus gpoly_estranged_constant(enum GpolySign s1, enum GpolySign s2, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GPOLY_H */
