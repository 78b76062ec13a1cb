#ifndef CPSD_H
#define CPSD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CpsdStatus {
  CPSD_STATUS_OK = 0,
  CPSD_STATUS_NULL_POINTER = 1,
  CPSD_STATUS_INVALID_ARGUMENT = 2,
  CPSD_STATUS_PARSE = 3,
  CPSD_STATUS_RESOURCE_CAP = 4,
  CPSD_STATUS_CERTIFICATE = 5,
  CPSD_STATUS_IO = 6,
  CPSD_STATUS_PANIC = 7,
} CpsdStatus;

/**
 * Which cone a membership query refers to.
 */
typedef enum CpsdCone {
  CPSD_CONE_C = 0,
  CPSD_CONE_D = 1,
  CPSD_CONE_O = 2,
  CPSD_CONE_OSTAR = 3,
} CpsdCone;

typedef enum CpsdVariant {
  CPSD_VARIANT_Q = 0,
  CPSD_VARIANT_QA = 1,
} CpsdVariant;

/**
 * Opaque graph.
 */
typedef struct CpsdGraph CpsdGraph;

/**
 * Opaque symmetric rational matrix.
 */
typedef struct CpsdMatrix CpsdMatrix;

/**
 * Resource caps; pass `NULL` wherever accepted for the defaults.
 */
typedef struct CpsdLimits {
  uint64_t max_tuples;
  uint64_t max_pivots;
} CpsdLimits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or `NULL`. Valid until the
 * next call into the library from the same thread.
 */
const char *cpsd_last_error(void);

/**
 * Default resource caps.
 */
struct CpsdLimits cpsd_default_limits(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cpsd_string_free(char *s);

/**
 * Parses a matrix from JSON: `{"dim": n, "upper": [...]}` or an array of rows.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CpsdStatus cpsd_matrix_from_json(const char *json, struct CpsdMatrix **out);

/**
 * # Safety
 * `m` must come from [`cpsd_matrix_from_json`] and not be freed twice.
 */
void cpsd_matrix_free(struct CpsdMatrix *m);

/**
 * Dimension of `m`, or 0 for `NULL`.
 *
 * # Safety
 * `m` must be `NULL` or a live handle.
 */
size_t cpsd_matrix_dim(const struct CpsdMatrix *m);

/**
 * Exact positive semidefiniteness.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum CpsdStatus cpsd_matrix_is_psd(const struct CpsdMatrix *m, bool *out);

/**
 * Parses a graph from DIMACS `.col` text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CpsdStatus cpsd_graph_from_dimacs(const char *text, struct CpsdGraph **out);

/**
 * # Safety
 * `g` must come from [`cpsd_graph_from_dimacs`] and not be freed twice.
 */
void cpsd_graph_free(struct CpsdGraph *g);

/**
 * # Safety
 * `g` must be `NULL` or a live handle.
 */
size_t cpsd_graph_vertex_count(const struct CpsdGraph *g);

/**
 * # Safety
 * `g` must be `NULL` or a live handle.
 */
size_t cpsd_graph_edge_count(const struct CpsdGraph *g);

/**
 * Chromatic number by exhaustive search; writes 0 when more than `t_max`
 * colors are needed.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum CpsdStatus cpsd_graph_chromatic_number(const struct CpsdGraph *g, size_t t_max, size_t *out);

/**
 * Number of tuples in the grid for `(n, r)`, as a decimal string.
 *
 * # Safety
 * `out` must be a valid pointer; free the result with [`cpsd_string_free`].
 */
enum CpsdStatus cpsd_count_tuples(size_t n, size_t r, char **out);

/**
 * Membership of `m` in the chosen cone at level `r`. Writes whether `m` is a
 * member and, when `certificate` is non-null, the JSON certificate.
 *
 * # Safety
 * `m` must be a live handle, `member` a valid pointer, `limits` and
 * `certificate` either `NULL` or valid.
 */
enum CpsdStatus cpsd_cone_member(const struct CpsdMatrix *m,
                                 enum CpsdCone cone,
                                 size_t r,
                                 const struct CpsdLimits *limits,
                                 bool *member,
                                 char **certificate);

/**
 * Smallest `t ≤ t_max` for which the game program is feasible, or 0.
 *
 * # Safety
 * `g` must be a live handle, `t_out` a valid pointer, `limits` and
 * `certificate` either `NULL` or valid.
 */
enum CpsdStatus cpsd_game_solve(const struct CpsdGraph *g,
                                enum CpsdVariant variant,
                                size_t k,
                                size_t r,
                                size_t t_max,
                                const struct CpsdLimits *limits,
                                size_t *t_out,
                                char **certificate);

/**
 * Re-checks a JSON certificate.
 *
 * # Safety
 * `json` must be a NUL-terminated string, `valid` a valid pointer and
 * `limits` either `NULL` or valid.
 */
enum CpsdStatus cpsd_verify_certificate(const char *json,
                                        const struct CpsdLimits *limits,
                                        bool *valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CPSD_H */
