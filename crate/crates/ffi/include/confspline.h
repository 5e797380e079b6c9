#ifndef CONFSPLINE_H
#define CONFSPLINE_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ConfsplineStatus {
  CONFSPLINE_STATUS_OK = 0,
  /**
   * A required pointer was null or a buffer had the wrong length.
   */
  CONFSPLINE_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Malformed or inconsistent input data.
   */
  CONFSPLINE_STATUS_INPUT_ERROR = 2,
  /**
   * The solver did not converge or the system was singular.
   */
  CONFSPLINE_STATUS_NUMERICAL_ERROR = 3,
  /**
   * An internal panic was caught.
   */
  CONFSPLINE_STATUS_PANIC = 4,
} ConfsplineStatus;

/**
 * Triangle mesh with vertex positions.
 */
typedef struct ConfsplineMesh ConfsplineMesh;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *confspline_last_error(void);

/**
 * Library version as a static string.
 */
const char *confspline_version(void);

/**
 * Builds a mesh from `3 * vertex_count` coordinates and `3 * face_count`
 * zero-based vertex indices.
 *
 * # Safety
 * `positions` and `faces` must point to arrays of the stated lengths and
 * `out` must be writable.
 */
enum ConfsplineStatus confspline_mesh_new(const double *positions,
                                          size_t vertex_count,
                                          const uint32_t *faces,
                                          size_t face_count,
                                          struct ConfsplineMesh **out);

/**
 * Reads a triangle OBJ file.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` writable.
 */
enum ConfsplineStatus confspline_mesh_read_obj(const char *path, struct ConfsplineMesh **out);

/**
 * # Safety
 * `mesh` must be a valid handle and `path` a nul-terminated string.
 */
enum ConfsplineStatus confspline_mesh_write_obj(const struct ConfsplineMesh *mesh,
                                                const char *path);

/**
 * Releases a mesh. Null is ignored.
 *
 * # Safety
 * `mesh` must come from this library and not be used afterwards.
 */
void confspline_mesh_free(struct ConfsplineMesh *mesh);

/**
 * Number of vertices, or 0 for a null handle.
 *
 * # Safety
 * `mesh` must be null or a valid handle.
 */
size_t confspline_mesh_vertex_count(const struct ConfsplineMesh *mesh);

/**
 * Number of faces, or 0 for a null handle.
 *
 * # Safety
 * `mesh` must be null or a valid handle.
 */
size_t confspline_mesh_face_count(const struct ConfsplineMesh *mesh);

/**
 * Copies the positions into `out`, which holds `len = 3 * vertex_count`
 * doubles.
 *
 * # Safety
 * `mesh` must be a valid handle and `out` writable for `len` doubles.
 */
enum ConfsplineStatus confspline_mesh_positions(const struct ConfsplineMesh *mesh,
                                                double *out,
                                                size_t len);

/**
 * Total discrete Willmore energy.
 *
 * # Safety
 * `mesh` must be a valid handle and `out` writable.
 */
enum ConfsplineStatus confspline_willmore_energy(const struct ConfsplineMesh *mesh, double *out);

/**
 * Energy gradient, `3 * vertex_count` doubles.
 *
 * # Safety
 * `mesh` must be a valid handle and `out` writable for `len` doubles.
 */
enum ConfsplineStatus confspline_willmore_gradient(const struct ConfsplineMesh *mesh,
                                                   double *out,
                                                   size_t len);

/**
 * Largest relative residual of the four conservation identities.
 *
 * # Safety
 * `mesh` must be a valid handle and `out` writable.
 */
enum ConfsplineStatus confspline_conservation_residual(const struct ConfsplineMesh *mesh,
                                                       double *out);

/**
 * Minimizes the Willmore energy in the mesh's own conformal class with the
 * listed vertices held at `targets` (`3 * count` doubles; null keeps them
 * in place). Positions are updated in place, also when the solver stops
 * without converging. `iterations` may be null.
 *
 * # Safety
 * `mesh` must be a valid handle; `vertices` must hold `count` indices and
 * `targets`, when not null, `3 * count` doubles.
 */
enum ConfsplineStatus confspline_solve_pinned(struct ConfsplineMesh *mesh,
                                              const uint32_t *vertices,
                                              const double *targets,
                                              size_t count,
                                              size_t max_iterations,
                                              size_t *iterations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONFSPLINE_H */
