#ifndef SPINDLE_H
#define SPINDLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpindleStatus {
  SPINDLE_STATUS_OK = 0,
  SPINDLE_STATUS_NULL_POINTER = 1,
  SPINDLE_STATUS_UNSUPPORTED_FAMILY = 2,
  SPINDLE_STATUS_INVALID_RANK = 3,
  SPINDLE_STATUS_DIMENSION_MISMATCH = 4,
  SPINDLE_STATUS_NOT_DOMINANT = 5,
  SPINDLE_STATUS_INVALID_PRIME = 6,
  SPINDLE_STATUS_UNSUPPORTED_CHARACTERISTIC = 7,
  SPINDLE_STATUS_INVALID_WEIGHT = 8,
  SPINDLE_STATUS_NOT_IN_LATTICE = 9,
  SPINDLE_STATUS_OVERFLOW = 10,
  SPINDLE_STATUS_UNKNOWN_FACTORIZATION = 11,
  SPINDLE_STATUS_AMBIGUOUS_MULTIPLICITY = 12,
  SPINDLE_STATUS_INTERNAL = 13,
  SPINDLE_STATUS_PANIC = 14,
} SpindleStatus;

typedef enum SpindleFamily {
  SPINDLE_FAMILY_A = 0,
  SPINDLE_FAMILY_B = 1,
  SPINDLE_FAMILY_D = 2,
} SpindleFamily;

/*
 Opaque handle to a root system.
 */
typedef struct SpindleRootSystem SpindleRootSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates a root system of the given family and rank.

 # Safety
 `out` must be valid for writes. The handle must be released with
 [`spindle_root_system_free`].
 */
enum SpindleStatus spindle_root_system_new(enum SpindleFamily family,
                                           size_t rank,
                                           struct SpindleRootSystem **out);

/*
 # Safety
 `h` must be null or a handle from [`spindle_root_system_new`] not yet freed.
 */
void spindle_root_system_free(struct SpindleRootSystem *h);

/*
 Rank of the root system, 0 for a null handle.

 # Safety
 `h` must be null or a live handle.
 */
size_t spindle_root_system_rank(const struct SpindleRootSystem *h);

/*
 `dim V(λ)` by Weyl's formula.

 # Safety
 `h` must be a live handle, `coords` must point to `len` integers and
 `out` must be valid for writes.
 */
enum SpindleStatus spindle_weyl_dim(const struct SpindleRootSystem *h,
                                    const int64_t *coords,
                                    size_t len,
                                    int64_t *out);

/*
 `dim L(λ)` in characteristic `p` for the weights the structure solver covers.

 # Safety
 As for [`spindle_weyl_dim`].
 */
enum SpindleStatus spindle_irreducible_dim(const struct SpindleRootSystem *h,
                                           uint64_t p,
                                           const int64_t *coords,
                                           size_t len,
                                           int64_t *out);

/*
 Dominant multiplicities of `ch V(λ)` as a JSON report.

 # Safety
 `h` must be a live handle, `coords` must point to `len` integers and
 `out` must be valid for writes. Free the string with [`spindle_string_free`].
 */
enum SpindleStatus spindle_character_json(const struct SpindleRootSystem *h,
                                          const int64_t *coords,
                                          size_t len,
                                          char **out);

/*
 Composition factors and radical of `V(λ)`, with the published table row
 when `diff_tables` is nonzero.

 # Safety
 As for [`spindle_character_json`].
 */
enum SpindleStatus spindle_structure_json(const struct SpindleRootSystem *h,
                                          uint64_t p,
                                          const int64_t *coords,
                                          size_t len,
                                          int32_t diff_tables,
                                          char **out);

/*
 The Jantzen sum of `λ`; truncated below `μ` when `mu_coords` is non-null.

 # Safety
 As for [`spindle_character_json`]; `mu_coords`, if non-null, must point
 to `len` integers.
 */
enum SpindleStatus spindle_jantzen_json(const struct SpindleRootSystem *h,
                                        uint64_t p,
                                        const int64_t *coords,
                                        const int64_t *mu_coords,
                                        size_t len,
                                        char **out);

/*
 Composition factors of `L(λ₁+λ_j)` restricted from `SL(W)` to the group
 of `h` (type B or D). `coords` are `SL(W)` fundamental coordinates.

 # Safety
 As for [`spindle_character_json`].
 */
enum SpindleStatus spindle_branch_json(const struct SpindleRootSystem *h,
                                       uint64_t p,
                                       const int64_t *coords,
                                       size_t len,
                                       int32_t diff_tables,
                                       char **out);

/*
 Releases a string returned by this library.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void spindle_string_free(char *s);

/*
 Message for the last failure on this thread, or null. The pointer stays
 valid until the next call into the library on the same thread.
 */
const char *spindle_last_error_message(void);

/*
 Stable name of a status code, as a static string.
 */
const char *spindle_status_name(enum SpindleStatus s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINDLE_H */
