#ifndef GOODCOLOUR_H
#define GOODCOLOUR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_POINTER = 1,
  GC_STATUS_INVALID_UTF8 = 2,
  GC_STATUS_PARSE_ERROR = 3,
  GC_STATUS_INVALID_ARGUMENT = 4,
  GC_STATUS_BUDGET_EXCEEDED = 5,
  GC_STATUS_PANIC = 6,
} GcStatus;

/**
 * Opaque hypergraph handle.
 */
typedef struct GcHypergraph GcHypergraph;

/**
 * Opaque instance handle.
 */
typedef struct GcInstance GcInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *gc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gc_version(void);

/**
 * Parses an edge list or graph JSON.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GcStatus gc_hypergraph_parse(const char *text, struct GcHypergraph **out);

/**
 * # Safety
 * `graph` must be null or come from `gc_hypergraph_parse` and not be used afterwards.
 */
void gc_hypergraph_free(struct GcHypergraph *graph);

/**
 * # Safety
 * `graph` must be a live handle or null (returns 0).
 */
size_t gc_hypergraph_num_vertices(const struct GcHypergraph *graph);

/**
 * # Safety
 * `graph` must be a live handle or null (returns 0).
 */
size_t gc_hypergraph_num_edges(const struct GcHypergraph *graph);

/**
 * # Safety
 * `graph` must be a live handle or null (returns 0).
 */
size_t gc_hypergraph_max_degree(const struct GcHypergraph *graph);

/**
 * Parses an instance from JSON (or an edge list, giving the proper instance).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GcStatus gc_instance_parse(const char *text, struct GcInstance **out);

/**
 * The proper-colouring instance of a hypergraph. The hypergraph is copied.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_instance_proper(const struct GcHypergraph *graph, struct GcInstance **out);

/**
 * # Safety
 * `instance` must be null or a handle from this library, not used afterwards.
 */
void gc_instance_free(struct GcInstance *instance);

/**
 * Evaluates the key condition with `c` colours.
 *
 * # Safety
 * `instance` must be a live handle; `satisfied` and `min_slack` valid pointers.
 */
enum GcStatus gc_check_key(const struct GcInstance *instance,
                           double beta,
                           uint64_t c,
                           bool *satisfied,
                           double *min_slack);

/**
 * Best `beta >= 1` and the colour count it needs.
 *
 * # Safety
 * `instance` must be a live handle; `beta` and `c` valid pointers.
 */
enum GcStatus gc_optimize_beta(const struct GcInstance *instance, double *beta, uint64_t *c);

/**
 * Exact number of good colourings with lists `{1..colours}`, written as a
 * decimal string. `colours = 0` uses the lists stored in the instance.
 *
 * # Safety
 * `instance` must be a live handle and `out` a valid pointer.
 */
enum GcStatus gc_count_good(const struct GcInstance *instance,
                            uint64_t colours,
                            uint64_t budget,
                            char **out);

/**
 * Closed-form bound for a JSON request such as
 * `{"app": "proper-hypergraph", "r": 3, "delta": 4}`; writes the JSON result.
 *
 * # Safety
 * `request` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GcStatus gc_closed_form_json(const char *request, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library, not used afterwards.
 */
void gc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOODCOLOUR_H */
