#ifndef G2COVER_H
#define G2COVER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum G2Status {
  G2_STATUS_OK = 0,
  G2_STATUS_NULL_POINTER = 1,
  G2_STATUS_CONFIG = 2,
  G2_STATUS_DOMAIN = 3,
  G2_STATUS_RESOURCE = 4,
  G2_STATUS_HYPOTHESIS = 5,
  G2_STATUS_PARSE = 6,
  G2_STATUS_INVALID_UTF8 = 7,
  G2_STATUS_PANIC = 8,
} G2Status;

/**
 * A rank-3 incidence geometry.
 */
typedef struct G2Geometry G2Geometry;

/**
 * The hexagon model over GF(q) with its line and plane classification.
 */
typedef struct G2Workbench G2Workbench;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *g2_last_error_message(void);

/**
 * Static version string.
 */
const char *g2_version(void);

/**
 * Builds the workbench over GF(q); q must be a power of two.
 *
 * # Safety
 * `out` must be null or point to writable storage for one pointer.
 */
enum G2Status g2_workbench_new(uint32_t q, struct G2Workbench **out);

/**
 * # Safety
 * `wb` must be null or a handle from `g2_workbench_new` not yet freed.
 */
void g2_workbench_free(struct G2Workbench *wb);

/**
 * Line and plane census as JSON.
 *
 * # Safety
 * `wb` must be a live handle; `out` must point to writable storage.
 */
enum G2Status g2_census_json(const struct G2Workbench *wb, char **out);

/**
 * Builds the geometry Γ`variant` (0..3).
 *
 * # Safety
 * `wb` must be a live handle; `out` must point to writable storage.
 */
enum G2Status g2_geometry_build(const struct G2Workbench *wb,
                                uint8_t variant,
                                struct G2Geometry **out);

/**
 * Parses a geometry from the JSON written by `g2_geometry_to_json` or the
 * `build` command.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must point to writable storage.
 */
enum G2Status g2_geometry_from_json(const char *json, struct G2Geometry **out);

/**
 * # Safety
 * `g` must be null or a geometry handle not yet freed.
 */
void g2_geometry_free(struct G2Geometry *g);

/**
 * Number of elements of the given type (1, 2 or 3).
 *
 * # Safety
 * `g` must be a live handle; `out` must point to writable storage.
 */
enum G2Status g2_geometry_count(const struct G2Geometry *g, uint8_t element_type, size_t *out);

/**
 * # Safety
 * `g` must be a live handle; `out` must point to writable storage.
 */
enum G2Status g2_geometry_to_json(const struct G2Geometry *g, char **out);

/**
 * Order of the fundamental group of the flag complex, enumerating at most
 * `cap` live cosets. `*finite` is false when the cap was reached, in which
 * case `*order` is 0.
 *
 * # Safety
 * `g` must be a live handle; `order` and `finite` must point to writable storage.
 */
enum G2Status g2_geometry_pi1_order(const struct G2Geometry *g,
                                    size_t cap,
                                    uint64_t *order,
                                    bool *finite);

/**
 * Certificate for the amalgam of parabolics of Γ`variant` as JSON; q must
 * be 2. `*concluded` tells whether the certificate reached its conclusion.
 *
 * # Safety
 * `wb` must be a live handle; `out` and `concluded` must point to writable storage.
 */
enum G2Status g2_certify_json(const struct G2Workbench *wb,
                              uint8_t variant,
                              size_t cap,
                              bool *concluded,
                              char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void g2_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* G2COVER_H */
