#ifndef CREMONA_H
#define CREMONA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum CrStatus {
  CR_STATUS_OK = 0,
  CR_STATUS_NULL_POINTER = 1,
  CR_STATUS_PARSE = 2,
  CR_STATUS_INVALID = 3,
  CR_STATUS_NOT_FOUND = 4,
  CR_STATUS_BUDGET = 5,
  CR_STATUS_VERIFICATION = 6,
  CR_STATUS_PANIC = 7,
} CrStatus;

/**
 * Opaque handle to a plane birational map.
 */
typedef struct CrMap CrMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; valid until the next failing call.
 */
const char *cr_last_error(void);

/**
 * Parse a map from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CrStatus cr_map_from_json(const char *json, struct CrMap **out);

/**
 * JSON form of a map; release the string with [`cr_string_free`].
 *
 * # Safety
 * `map` must come from this library and `out` must be a valid pointer.
 */
enum CrStatus cr_map_to_json(const struct CrMap *map, char **out);

/**
 * Degree of a map.
 *
 * # Safety
 * `map` must come from this library and `out` must be a valid pointer.
 */
enum CrStatus cr_map_degree(const struct CrMap *map, uint32_t *out);

/**
 * `f ∘ g`.
 *
 * # Safety
 * `f` and `g` must come from this library and `out` must be a valid pointer.
 */
enum CrStatus cr_map_compose(const struct CrMap *f, const struct CrMap *g, struct CrMap **out);

/**
 * Inverse of a map, which has the same degree; `NotFound` if `f` is not birational.
 *
 * # Safety
 * `f` must come from this library and `out` must be a valid pointer.
 */
enum CrStatus cr_map_invert(const struct CrMap *f, struct CrMap **out);

/**
 * Writes `deg(f^n)` for `n = 0..=n_max` into `out`, which holds `len >= n_max + 1` entries.
 *
 * # Safety
 * `f` must come from this library and `out` must point to `len` writable integers.
 */
enum CrStatus cr_map_degree_sequence(const struct CrMap *f,
                                     size_t n_max,
                                     uint64_t *out,
                                     size_t len);

/**
 * Release a map. Null is ignored.
 *
 * # Safety
 * `map` must come from this library and not be used afterwards.
 */
void cr_map_free(struct CrMap *map);

/**
 * Release a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void cr_string_free(char *s);

/**
 * Run the `oscillate` command on a JSON input such as `{"support": {"2": 1}, "seed": 17}`.
 *
 * The full report is written to `out`; `Verification` is returned when the
 * synthesized map fails its checks.
 *
 * # Safety
 * `input` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CrStatus cr_oscillate_json(const char *input, char **out);

/**
 * Run any command line, e.g. `"--horizon 4 degrees"`, on a JSON input.
 *
 * The report goes to `out` and the process-style exit status to `exit_status`.
 *
 * # Safety
 * `args` and `input` must be NUL-terminated strings; `out` and `exit_status` valid pointers.
 */
enum CrStatus cr_run_json(const char *args, const char *input, char **out, int32_t *exit_status);

/**
 * Degree `e0 . M(e0)` of a lattice isometry given as 100 row-major integers.
 *
 * # Safety
 * `matrix` must point to 100 readable integers and `out` must be valid.
 */
enum CrStatus cr_lattice_isometry_degree(const int64_t *matrix, int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CREMONA_H */
