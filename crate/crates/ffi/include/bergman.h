#ifndef BERGMAN_H
#define BERGMAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes.
 */
typedef enum BergmanStatus {
  BERGMAN_STATUS_OK = 0,
  BERGMAN_STATUS_NULL_POINTER = 1,
  BERGMAN_STATUS_INVALID_UTF8 = 2,
  BERGMAN_STATUS_PARSE_ERROR = 3,
  BERGMAN_STATUS_INVALID_MATROID = 4,
  BERGMAN_STATUS_SIZE_LIMIT = 5,
  BERGMAN_STATUS_INVALID_ARGUMENT = 6,
  /**
   * The point lies outside the Bergman fan.
   */
  BERGMAN_STATUS_NOT_IN_FAN = 7,
  BERGMAN_STATUS_PANIC = 8,
} BergmanStatus;

/**
 * Opaque fan handle. Owns a copy of its matroid.
 */
typedef struct BergmanFan BergmanFan;

/**
 * Opaque matroid handle.
 */
typedef struct BergmanMatroid BergmanMatroid;

/**
 * Message describing the last failure on this thread, or "" after success.
 * The pointer stays valid until the next library call on this thread.
 */
const char *bergman_last_error_message(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void bergman_string_free(char *s);

/**
 * Parses a matroid document (`bases`, `uniform` or `graphic` kind).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BergmanStatus bergman_matroid_from_json(const char *json, struct BergmanMatroid **out);

/**
 * The uniform matroid U_{r,n} on elements labelled 0..n-1.
 *
 * # Safety
 * `out` must be writable.
 */
enum BergmanStatus bergman_matroid_uniform(int64_t r, int64_t n, struct BergmanMatroid **out);

/**
 * # Safety
 * `m` must come from this library and not have been freed. Null is ignored.
 */
void bergman_matroid_free(struct BergmanMatroid *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum BergmanStatus bergman_matroid_rank(const struct BergmanMatroid *m, size_t *out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum BergmanStatus bergman_matroid_num_flats(const struct BergmanMatroid *m, size_t *out);

/**
 * Rank-by-rank listing of the lattice of flats with its cover edges.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum BergmanStatus bergman_matroid_lattice_text(const struct BergmanMatroid *m, char **out);

/**
 * Builds the Bergman fan. `max_flats == 0` selects the default limit.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum BergmanStatus bergman_fan_build(const struct BergmanMatroid *m,
                                     size_t max_flats,
                                     struct BergmanFan **out);

/**
 * # Safety
 * `f` must come from this library and not have been freed. Null is ignored.
 */
void bergman_fan_free(struct BergmanFan *f);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum BergmanStatus bergman_fan_num_cones(const struct BergmanFan *f, size_t *out);

/**
 * The fan export document.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum BergmanStatus bergman_fan_to_json(const struct BergmanFan *f, char **out);

/**
 * Classifies a comma-separated rational point. On success writes a JSON
 * object with the flag and type; returns `NOT_IN_FAN` and writes nothing
 * when the point lies outside the fan.
 *
 * # Safety
 * `f` must be a live handle, `point` NUL-terminated, `out` writable.
 */
enum BergmanStatus bergman_fan_classify_point(const struct BergmanFan *f,
                                              const char *point,
                                              char **out);

/**
 * Checks every (i,k)-balancing relation at every cone. Either count
 * pointer may be null.
 *
 * # Safety
 * `f` must be a live handle; non-null out-pointers must be writable.
 */
enum BergmanStatus bergman_verify_balancing(const struct BergmanFan *f,
                                            size_t *relations_checked,
                                            size_t *violations);

/**
 * Solver output `{ "dim": d, "basis": [...] }` for balanced weights on the
 * k-skeleton. With `certified`, only weights whose boundary relations are
 * combinations of (i,k) relations.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum BergmanStatus bergman_weights_solve_json(const struct BergmanFan *f,
                                              size_t k,
                                              bool certified,
                                              char **out);

/**
 * Checks a weight file against the balancing condition.
 *
 * # Safety
 * `f` must be a live handle, `weights` NUL-terminated, `balanced` writable.
 */
enum BergmanStatus bergman_weights_check_json(const struct BergmanFan *f,
                                              const char *weights,
                                              bool *balanced);

#endif  /* BERGMAN_H */
