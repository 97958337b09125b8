#ifndef TRIQAL_H
#define TRIQAL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which identity [`triqal_identity_residual`] evaluates.
 */
typedef enum TriqalIdentity {
  TRIQAL_IDENTITY_PENTAGON = 0,
  TRIQAL_IDENTITY_PENTAGON_COORDINATE = 1,
  TRIQAL_IDENTITY_PACHNER14 = 2,
  TRIQAL_IDENTITY_CUBIC = 3,
  TRIQAL_IDENTITY_PROJECTOR = 4,
} TriqalIdentity;

/**
 * Result code of every call.
 */
typedef enum TriqalStatus {
  TRIQAL_STATUS_OK = 0,
  TRIQAL_STATUS_NULL_POINTER = 1,
  /**
   * Malformed JSON, bad UTF-8, out-of-range argument.
   */
  TRIQAL_STATUS_INVALID_INPUT = 2,
  TRIQAL_STATUS_SINGULAR_FORM = 3,
  /**
   * Tensor shapes or signatures do not fit together.
   */
  TRIQAL_STATUS_SHAPE = 4,
  TRIQAL_STATUS_TOO_LARGE = 5,
  TRIQAL_STATUS_UNSUPPORTED = 6,
  TRIQAL_STATUS_PANIC = 7,
} TriqalStatus;

/**
 * Opaque algebra handle.
 */
typedef struct TriqalAlgebra TriqalAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *triqal_last_error(void);

/**
 * Parses an algebra file (JSON, UTF-8, nul-terminated).
 *
 * # Safety
 * `json` must be null or a valid C string; `out` must be null or writable.
 */
enum TriqalStatus triqal_algebra_from_json(const char *json, struct TriqalAlgebra **out);

/**
 * Member of the two-dimensional solution families. `sign` is +1 or -1,
 * `branch` is 1 or 2.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum TriqalStatus triqal_algebra_family(double d_re,
                                        double d_im,
                                        double alpha_re,
                                        double alpha_im,
                                        int32_t sign,
                                        int32_t branch,
                                        struct TriqalAlgebra **out);

/**
 * The identity solution in dimension two.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum TriqalStatus triqal_algebra_trivial(struct TriqalAlgebra **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `handle` must come from this library and not be used afterwards.
 */
void triqal_algebra_free(struct TriqalAlgebra *handle);

/**
 * # Safety
 * `handle` must be null or live; `out` must be null or writable.
 */
enum TriqalStatus triqal_algebra_dimension(const struct TriqalAlgebra *handle, size_t *out);

/**
 * Serializes the algebra file. Free the result with [`triqal_string_free`].
 *
 * # Safety
 * `handle` must be null or live; `out` must be null or writable.
 */
enum TriqalStatus triqal_algebra_to_json(const struct TriqalAlgebra *handle, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void triqal_string_free(char *s);

/**
 * Residual of axiom `axiom` (1 to 7). The file's `h`, or the identity, is
 * used to derive the ternary tensor when the file has none.
 *
 * # Safety
 * `handle` must be null or live; `out` must be null or writable.
 */
enum TriqalStatus triqal_axiom_residual(const struct TriqalAlgebra *handle,
                                        uint32_t axiom,
                                        double *out);

/**
 * # Safety
 * `handle` must be null or live; `out` must be null or writable.
 */
enum TriqalStatus triqal_identity_residual(const struct TriqalAlgebra *handle,
                                           uint32_t which,
                                           double *out);

/**
 * State-sum value of the lens space L(p,q) with the file's `h` (identity if
 * absent).
 *
 * # Safety
 * `handle` must be null or live; `re` and `im` must be null or writable.
 */
enum TriqalStatus triqal_lens_invariant(const struct TriqalAlgebra *handle,
                                        uint32_t p,
                                        uint32_t q,
                                        double *re,
                                        double *im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIQAL_H */
