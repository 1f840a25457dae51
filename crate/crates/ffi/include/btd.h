#ifndef BTD_H
#define BTD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  BTD_STATUS_OK = 0,
  BTD_STATUS_NULL_POINTER = 1,
  BTD_STATUS_PARSE = 2,
  BTD_STATUS_INVALID_ARGUMENT = 3,
  BTD_STATUS_INVALID_RANKING = 4,
  BTD_STATUS_GUARD_EXCEEDED = 5,
  BTD_STATUS_PRECONDITION = 6,
  BTD_STATUS_OUT_OF_RANGE = 7,
  BTD_STATUS_INTERNAL = 8,
} BtdStatus;

// Opaque elimination forest handle.
typedef struct BtdElim BtdElim;

// Opaque forest handle.
typedef struct BtdForest BtdForest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until
// the next call on the same thread.
const char *btd_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *btd_version(void);

// Parses an edge list or JSON forest document.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
BtdStatus btd_forest_parse(const char *text, BtdForest **out);

// Builds a forest on vertices `0..vertices` from `edges` pairs laid out as
// `u0, v0, u1, v1, ...`.
//
// # Safety
// `edges` must point to `2 * edge_count` values and `out` be valid.
BtdStatus btd_forest_from_edges(size_t vertices,
                                const uint32_t *edges,
                                size_t edge_count,
                                BtdForest **out);

// # Safety
// `forest` must come from this library and not be used afterwards.
void btd_forest_free(BtdForest *forest);

// # Safety
// `forest` must be a valid handle or NULL (returns 0).
size_t btd_forest_edge_count(const BtdForest *forest);

// # Safety
// `forest` must be a valid handle or NULL (returns 0).
size_t btd_forest_vertex_count(const BtdForest *forest);

// Minimum-height elimination forest.
//
// # Safety
// `forest` must be a valid handle and `out` a valid pointer.
BtdStatus btd_rank_optimal(const BtdForest *forest, BtdElim **out);

// Elimination tree of width at most `b` and height at most the minimum
// height plus `2b`. The forest must be a tree.
//
// # Safety
// `forest` must be a valid handle and `out` a valid pointer.
BtdStatus btd_approx_tree(const BtdForest *forest, size_t b, BtdElim **out);

// Exact minimum height with width at most `b`. Refuses forests above the
// default edge guard unless `force` is nonzero.
//
// # Safety
// `forest` must be a valid handle and `out` a valid pointer.
BtdStatus btd_exact(const BtdForest *forest, size_t b, int32_t force, BtdElim **out);

// Elimination forest from explicit levels, one per edge.
//
// # Safety
// `levels` must point to `len` values; `forest` and `out` must be valid.
BtdStatus btd_elim_from_levels(const BtdForest *forest,
                               const uint32_t *levels,
                               size_t len,
                               BtdElim **out);

// Number of ranking violations of `levels` on `forest`, written to
// `violations`. A length mismatch is `BTD_STATUS_INVALID_RANKING`.
//
// # Safety
// `levels` must point to `len` values; the other pointers must be valid.
BtdStatus btd_validate_levels(const BtdForest *forest,
                              const uint32_t *levels,
                              size_t len,
                              size_t *violations);

// # Safety
// `elim` must come from this library and not be used afterwards.
void btd_elim_free(BtdElim *elim);

// # Safety
// `elim` must be a valid handle or NULL (returns 0).
uint32_t btd_elim_height(const BtdElim *elim);

// # Safety
// `elim` must be a valid handle or NULL (returns 0).
size_t btd_elim_width(const BtdElim *elim);

// # Safety
// `elim` must be a valid handle or NULL (returns 0).
size_t btd_elim_edge_count(const BtdElim *elim);

// Copies the levels into `buf`, which must hold `btd_elim_edge_count`
// values; `len` is the capacity of `buf`.
//
// # Safety
// `elim` must be valid and `buf` point to `len` writable values.
BtdStatus btd_elim_levels(const BtdElim *elim, uint32_t *buf, size_t len);

// Parent of `edge` in the elimination forest, or `-1` for a root.
//
// # Safety
// `elim` and `parent` must be valid.
BtdStatus btd_elim_parent(const BtdElim *elim, size_t edge, int64_t *parent);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BTD_H */
