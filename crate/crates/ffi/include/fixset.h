#ifndef FIXSET_H
#define FIXSET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FixsetStatus {
  FIXSET_STATUS_OK = 0,
  FIXSET_STATUS_NULL_POINTER = 1,
  FIXSET_STATUS_INVALID_ARGUMENT = 2,
  FIXSET_STATUS_DIMENSION_MISMATCH = 3,
  FIXSET_STATUS_NON_FINITE = 4,
  FIXSET_STATUS_NOT_ORTHOGONAL = 5,
  FIXSET_STATUS_UNKNOWN_NAME = 6,
  FIXSET_STATUS_PARSE = 7,
  FIXSET_STATUS_IO = 8,
  FIXSET_STATUS_BUFFER_TOO_SMALL = 9,
  FIXSET_STATUS_PANIC = 10,
} FixsetStatus;

/**
 * Opaque scene handle.
 */
typedef struct FixsetScene FixsetScene;

/**
 * Opaque subspace handle.
 */
typedef struct FixsetSubspace FixsetSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *fixset_last_error(void);

/**
 * Span of `count` vectors of length `ambient`, read row-major from `vectors`.
 *
 * # Safety
 * `vectors` must point to `count * ambient` doubles (may be null when
 * `count == 0`); `out` must be writable.
 */
enum FixsetStatus fixset_subspace_span(size_t ambient,
                                       const double *vectors,
                                       size_t count,
                                       struct FixsetSubspace **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum FixsetStatus fixset_subspace_zero(size_t ambient, struct FixsetSubspace **out);

/**
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void fixset_subspace_free(struct FixsetSubspace *s);

/**
 * Dimension of the subspace; 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t fixset_subspace_dim(const struct FixsetSubspace *s);

/**
 * Ambient dimension; 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t fixset_subspace_ambient(const struct FixsetSubspace *s);

/**
 * Copies the orthonormal basis, `dim * ambient` doubles row-major, into
 * `buf` of capacity `len`.
 *
 * # Safety
 * `s` must be a live handle; `buf` must hold `len` doubles.
 */
enum FixsetStatus fixset_subspace_basis(const struct FixsetSubspace *s, double *buf, size_t len);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FixsetStatus fixset_subspace_complement(const struct FixsetSubspace *s,
                                             struct FixsetSubspace **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum FixsetStatus fixset_subspace_intersect(const struct FixsetSubspace *a,
                                            const struct FixsetSubspace *b,
                                            struct FixsetSubspace **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum FixsetStatus fixset_subspace_sum(const struct FixsetSubspace *a,
                                      const struct FixsetSubspace *b,
                                      struct FixsetSubspace **out);

/**
 * Writes the projector distance `‖P_a − P_b‖_F` to `distance`.
 *
 * # Safety
 * `a`, `b` must be live handles; `distance` must be writable.
 */
enum FixsetStatus fixset_subspace_distance(const struct FixsetSubspace *a,
                                           const struct FixsetSubspace *b,
                                           double *distance);

/**
 * Fixed-point subspace of `R_{chain[m-1]} ⋯ R_{chain[0]}`. `worst_residual`
 * may be null.
 *
 * # Safety
 * `chain` must point to `m` live handles; `out` must be writable.
 */
enum FixsetStatus fixset_fixed_subspace(const struct FixsetSubspace *const *chain,
                                        size_t m,
                                        struct FixsetSubspace **out,
                                        double *worst_residual);

/**
 * Composes reflections across lines at the given axis angles (application
 * order). Writes 1 to `is_reflection` for `Refl(angle)`, 0 for
 * `Rot(angle)`; `beta` receives the alternating sum and may be null.
 *
 * # Safety
 * `angles` must point to `m` doubles; outputs must be writable.
 */
enum FixsetStatus fixset_plane_compose_angles(const double *angles,
                                              size_t m,
                                              int32_t *is_reflection,
                                              double *angle,
                                              double *beta);

/**
 * Loads a TOML scene file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum FixsetStatus fixset_scene_load(const char *path, struct FixsetScene **out);

/**
 * # Safety
 * `s` must be null or a live scene handle.
 */
void fixset_scene_free(struct FixsetScene *s);

/**
 * Copies a named subspace of the scene into a new handle.
 *
 * # Safety
 * `scene` must be live; `name` NUL-terminated; `out` writable.
 */
enum FixsetStatus fixset_scene_subspace(const struct FixsetScene *scene,
                                        const char *name,
                                        struct FixsetSubspace **out);

/**
 * Fixed-point subspace of a named composition of the scene.
 *
 * # Safety
 * `scene` must be live; `composition` NUL-terminated; `out` writable.
 */
enum FixsetStatus fixset_scene_fix(const struct FixsetScene *scene,
                                   const char *composition,
                                   struct FixsetSubspace **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIXSET_H */
