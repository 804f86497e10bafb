#ifndef DOMIPACK_H
#define DOMIPACK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an exact solve.
 */
typedef enum DpSolveStatus {
  DP_SOLVE_STATUS_OPTIMAL = 0,
  DP_SOLVE_STATUS_INFEASIBLE = 1,
  DP_SOLVE_STATUS_BUDGET_EXCEEDED = 2,
} DpSolveStatus;

/**
 * Outcome of an FFI call.
 */
typedef enum DpStatus {
  DP_STATUS_OK = 0,
  DP_STATUS_NULL_POINTER = 1,
  DP_STATUS_INVALID_ARGUMENT = 2,
  DP_STATUS_PARSE_ERROR = 3,
  DP_STATUS_BUFFER_TOO_SMALL = 4,
  DP_STATUS_PANIC = 5,
} DpStatus;

/**
 * Opaque digraph handle.
 */
typedef struct DpDigraph DpDigraph;

/**
 * Opaque solve-result handle.
 */
typedef struct DpSolveResult DpSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next FFI call on the same thread.
 */
const char *dp_last_error_message(void);

/**
 * Default per-solve budget (validity checks).
 */
uint64_t dp_default_budget(void);

/**
 * Builds a digraph on `n` vertices from `arc_count` pairs stored flat in
 * `arcs` (`2 * arc_count` entries: tail, head, tail, head, ...).
 *
 * # Safety
 * `arcs` must point to `2 * arc_count` readable values (or be NULL when
 * `arc_count` is 0); `out` must be writable.
 */
enum DpStatus dp_digraph_new(size_t n,
                             const size_t *arcs,
                             size_t arc_count,
                             struct DpDigraph **out);

/**
 * Parses the `n m` / `u v` instance format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum DpStatus dp_digraph_parse(const char *text, struct DpDigraph **out);

/**
 * The converse digraph as a new handle.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum DpStatus dp_digraph_converse(const struct DpDigraph *d, struct DpDigraph **out);

/**
 * # Safety
 * `d` must be NULL or a handle not yet freed.
 */
void dp_digraph_free(struct DpDigraph *d);

/**
 * Number of vertices; 0 for NULL.
 *
 * # Safety
 * `d` must be NULL or a live handle.
 */
size_t dp_digraph_order(const struct DpDigraph *d);

/**
 * Number of arcs; 0 for NULL.
 *
 * # Safety
 * `d` must be NULL or a live handle.
 */
size_t dp_digraph_arc_count(const struct DpDigraph *d);

/**
 * Solves `kind` (a parameter name such as "gamma-t2" or "l2") exactly.
 *
 * # Safety
 * `d` must be a live handle, `kind` a NUL-terminated string, `out` writable.
 */
enum DpStatus dp_solve(const struct DpDigraph *d,
                       const char *kind,
                       uint64_t budget,
                       bool pruned,
                       struct DpSolveResult **out);

/**
 * # Safety
 * `r` must be a live handle.
 */
enum DpSolveStatus dp_solve_result_status(const struct DpSolveResult *r);

/**
 * Optimal value; `DP_STATUS_INVALID_ARGUMENT` when the solve was not optimal.
 *
 * # Safety
 * `r` must be a live handle; `out` writable.
 */
enum DpStatus dp_solve_result_value(const struct DpSolveResult *r, size_t *out);

/**
 * Copies the witness (ascending) into `buf`. `out_len` always receives the
 * witness size; `DP_STATUS_BUFFER_TOO_SMALL` if it exceeds `cap`.
 *
 * # Safety
 * `buf` must have room for `cap` values (may be NULL when `cap` is 0);
 * `out_len` writable.
 */
enum DpStatus dp_solve_result_witness(const struct DpSolveResult *r,
                                      size_t *buf,
                                      size_t cap,
                                      size_t *out_len);

/**
 * Validity checks performed by the solve.
 *
 * # Safety
 * `r` must be NULL or a live handle.
 */
uint64_t dp_solve_result_subsets_examined(const struct DpSolveResult *r);

/**
 * # Safety
 * `r` must be NULL or a handle not yet freed.
 */
void dp_solve_result_free(struct DpSolveResult *r);

/**
 * Checks `set` against `kind`. On a violation `*out_valid` is false and
 * `*out_vertex` names the first violating vertex.
 *
 * # Safety
 * `set` must hold `len` values (or be NULL when `len` is 0); outputs writable.
 */
enum DpStatus dp_validate(const struct DpDigraph *d,
                          const char *kind,
                          const size_t *set,
                          size_t len,
                          bool *out_valid,
                          size_t *out_vertex);

/**
 * Full bound audit as a JSON document. Free the string with [`dp_string_free`].
 *
 * # Safety
 * `d` must be a live handle; `out` writable.
 */
enum DpStatus dp_bounds_report_json(const struct DpDigraph *d, uint64_t budget, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void dp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DOMIPACK_H */
