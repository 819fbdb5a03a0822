#ifndef CT_FFI_H
#define CT_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtMode {
  CT_MODE_AUTO = 0,
  CT_MODE_THM_A = 1,
  CT_MODE_THM_B = 2,
  CT_MODE_BASIC = 3,
} CtMode;

typedef enum CtStatus {
  CT_STATUS_OK = 0,
  CT_STATUS_NULL_POINTER = 1,
  CT_STATUS_INVALID_ARGUMENT = 2,
  CT_STATUS_PARSE_ERROR = 3,
  CT_STATUS_NOT_FOUR_CHORDAL = 4,
  CT_STATUS_PRECONDITION = 5,
  CT_STATUS_CAP_EXCEEDED = 6,
  CT_STATUS_BOUND_MISS = 7,
  CT_STATUS_INTERNAL = 8,
  CT_STATUS_PANIC = 9,
} CtStatus;

// Opaque graph handle.
typedef struct CtGraph CtGraph;

// Opaque solve result handle.
typedef struct CtResult CtResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL
// terminated, truncated to `len`). Returns the full message length.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t ct_last_error(char *buf, size_t len);

size_t ct_bound(size_t n);

// Creates an edgeless graph on `n` vertices.
struct CtGraph *ct_graph_new(size_t n);

// Parses the `p <n> <m>` / `e <u> <v>` text format (1-indexed).
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum CtStatus ct_graph_parse(const char *text, struct CtGraph **out);

// # Safety
// `g` must be null or a handle from this library not yet freed.
void ct_graph_free(struct CtGraph *g);

// # Safety
// `g` must be a live handle.
enum CtStatus ct_graph_add_edge(struct CtGraph *g, size_t u, size_t v);

// Number of vertices, 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t ct_graph_n(const struct CtGraph *g);

// `Ok` if the graph is 4-chordal, else `NotFourChordal`.
//
// # Safety
// `g` must be a live handle.
enum CtStatus ct_is_four_chordal(const struct CtGraph *g);

// Runs the engine. On `Ok`, `*out` receives a result handle.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum CtStatus ct_solve(const struct CtGraph *g, enum CtMode mode, struct CtResult **out);

// # Safety
// `r` must be null or a result handle not yet freed.
void ct_result_free(struct CtResult *r);

// # Safety
// `r` must be null or a live result handle.
size_t ct_result_size(const struct CtResult *r);

// # Safety
// `r` must be null or a live result handle.
int64_t ct_result_saved(const struct CtResult *r);

// Whether the size is within `ct_bound(n)`.
//
// # Safety
// `r` must be null or a live result handle.
bool ct_result_bound_ok(const struct CtResult *r);

// Copies up to `len` red vertices into `buf`; returns the total count.
//
// # Safety
// `r` must be a live result handle; `buf` null or `len` writable slots.
size_t ct_result_red(const struct CtResult *r, size_t *buf, size_t len);

// Copies the JSON-lines trace into `buf` (NUL terminated, truncated to
// `len`); returns its full length in bytes.
//
// # Safety
// `r` must be a live result handle; `buf` null or `len` writable bytes.
size_t ct_result_trace(const struct CtResult *r, char *buf, size_t len);

// Replays the result's trace against `g`.
//
// # Safety
// Both handles must be live.
enum CtStatus ct_result_verify(const struct CtResult *r, const struct CtGraph *g);

// Exact minimum transversal size, searching up to `cap`.
//
// # Safety
// `g` must be a live handle; `out_size` must be writable.
enum CtStatus ct_min_transversal(const struct CtGraph *g, size_t cap, size_t *out_size);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CT_FFI_H */
