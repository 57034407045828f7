#ifndef TIMDOF_H
#define TIMDOF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TimdofStatus {
  TIMDOF_STATUS_OK = 0,
  TIMDOF_STATUS_NULL_POINTER = 1,
  TIMDOF_STATUS_INVALID_ARGUMENT = 2,
  TIMDOF_STATUS_PARSE_ERROR = 3,
  TIMDOF_STATUS_SIZE_LIMIT = 4,
  TIMDOF_STATUS_INTERNAL = 5,
  TIMDOF_STATUS_PANIC = 6,
} TimdofStatus;

/**
 * Opaque handle to a network topology.
 */
typedef struct TimdofTopology TimdofTopology;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or null.
 * The pointer stays valid until the next library call on this thread.
 */
const char *timdof_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *timdof_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum TimdofStatus timdof_topology_wyner(size_t k, struct TimdofTopology **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum TimdofStatus timdof_topology_cyclic_wyner(size_t k, struct TimdofTopology **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum TimdofStatus timdof_topology_fully_connected(size_t k, struct TimdofTopology **out);

/**
 * Three users; links into receiver 3 from transmitters 1 and 2 stay
 * constant over two slots.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum TimdofStatus timdof_topology_figure4(struct TimdofTopology **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum TimdofStatus timdof_topology_from_json(const char *json, struct TimdofTopology **out);

/**
 * # Safety
 * `topology` must come from this library; `out` must be valid for writes.
 */
enum TimdofStatus timdof_topology_to_json(const struct TimdofTopology *topology, char **out);

/**
 * # Safety
 * `topology` must come from this library; `k` must be valid for writes.
 */
enum TimdofStatus timdof_topology_user_count(const struct TimdofTopology *topology, size_t *k);

/**
 * # Safety
 * `topology` must be null or a handle from this library not yet freed.
 */
void timdof_topology_free(struct TimdofTopology *topology);

/**
 * Achievable sum DoF as `num / den` from an interference-avoidance schedule.
 *
 * # Safety
 * `topology` must come from this library; `num` and `den` must be valid for writes.
 */
enum TimdofStatus timdof_achievable_dof(const struct TimdofTopology *topology,
                                        uint64_t *num,
                                        uint64_t *den);

/**
 * Best certified upper bound on the sum DoF as `num / den`. Exhaustive
 * receiver-set search runs up to `exhaustive_limit` users.
 *
 * # Safety
 * `topology` must come from this library; `num` and `den` must be valid for writes.
 */
enum TimdofStatus timdof_upper_bound(const struct TimdofTopology *topology,
                                     size_t exhaustive_limit,
                                     uint64_t *num,
                                     uint64_t *den);

/**
 * Full analysis report, with certificates, as JSON.
 *
 * # Safety
 * `topology` must come from this library; `out` must be valid for writes.
 */
enum TimdofStatus timdof_analyze(const struct TimdofTopology *topology,
                                 size_t exhaustive_limit,
                                 uint64_t seed,
                                 char **out);

/**
 * Monte Carlo verification of a JSON linear scheme. Writes the verdict as
 * JSON to `out` and whether every active receiver decoded in every trial to
 * `fully_decodable`.
 *
 * # Safety
 * `topology` must come from this library; `scheme_json` must be a
 * NUL-terminated string; `out` and `fully_decodable` must be valid for writes.
 */
enum TimdofStatus timdof_verify_scheme(const struct TimdofTopology *topology,
                                       const char *scheme_json,
                                       size_t trials,
                                       uint64_t seed,
                                       char **out,
                                       bool *fully_decodable);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void timdof_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TIMDOF_H */
