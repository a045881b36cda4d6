#ifndef CINFRING_H
#define CINFRING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CinfStatus {
  CINF_STATUS_OK = 0,
  CINF_STATUS_NULL_POINTER = 1,
  CINF_STATUS_INVALID_UTF8 = 2,
  CINF_STATUS_SYNTAX = 3,
  CINF_STATUS_DOMAIN = 4,
  CINF_STATUS_ARITY = 5,
  CINF_STATUS_MISMATCH = 6,
  CINF_STATUS_NOT_POLYNOMIAL = 7,
  CINF_STATUS_NOT_A_POINT = 8,
  CINF_STATUS_OUT_OF_RANGE = 9,
  CINF_STATUS_WORKSPACE = 10,
  CINF_STATUS_PANIC = 11,
  CINF_STATUS_OTHER = 12,
} CinfStatus;

/*
 A parsed smooth expression.
 */
typedef struct CinfExpr CinfExpr;

/*
 Real points found by a search, in canonical order.
 */
typedef struct CinfPoints CinfPoints;

/*
 A finitely presented ring `C∞(ℝⁿ)/I`.
 */
typedef struct CinfRing CinfRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 The message of the last failed call on this thread, or null. The
 pointer stays valid until the next call into the library.
 */
const char *cinf_last_error(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void cinf_string_free(char *s);

/*
 # Safety
 `src` is a NUL-terminated string; `out` is writable.
 */
enum CinfStatus cinf_expr_parse(const char *src, struct CinfExpr **out);

/*
 Canonical text of `e`.

 # Safety
 `e` is a live handle; `out` is writable.
 */
enum CinfStatus cinf_expr_to_string(const struct CinfExpr *e, char **out);

/*
 # Safety
 `e` is a live handle, `point` holds `len` values, `out` is writable.
 */
enum CinfStatus cinf_expr_evaluate(const struct CinfExpr *e,
                                   const double *point,
                                   size_t len,
                                   double *out);

/*
 Partial derivative in `x{var}`, simplified.

 # Safety
 `e` is a live handle; `out` is writable.
 */
enum CinfStatus cinf_expr_differentiate(const struct CinfExpr *e,
                                        size_t var,
                                        struct CinfExpr **out);

/*
 # Safety
 `e` is null or a live handle, not used afterwards.
 */
void cinf_expr_free(struct CinfExpr *e);

/*
 `C∞(ℝ^arity)` modulo the `count` relations in `relations`.

 # Safety
 `relations` holds `count` NUL-terminated strings; `out` is writable.
 */
enum CinfStatus cinf_ring_new(size_t arity,
                              const char *const *relations,
                              size_t count,
                              struct CinfRing **out);

/*
 Number of generators; 0 for a null handle.

 # Safety
 `r` is null or a live handle.
 */
size_t cinf_ring_arity(const struct CinfRing *r);

/*
 # Safety
 `r` is a live handle; `out` is writable.
 */
enum CinfStatus cinf_ring_to_string(const struct CinfRing *r, char **out);

/*
 Real points in the cube `[lo, hi]^arity`, seeded from a grid of the
 given step.

 # Safety
 `r` is a live handle; `out` is writable.
 */
enum CinfStatus cinf_ring_find_points(const struct CinfRing *r,
                                      double lo,
                                      double hi,
                                      double step,
                                      struct CinfPoints **out);

/*
 Rank of the cotangent fibre at `point`, which must satisfy the
 relations within `tol`.

 # Safety
 `r` is a live handle, `point` holds `len` values, `out` is writable.
 */
enum CinfStatus cinf_ring_cotangent_rank(const struct CinfRing *r,
                                         const double *point,
                                         size_t len,
                                         double tol,
                                         size_t *out);

/*
 # Safety
 `r` is null or a live handle, not used afterwards.
 */
void cinf_ring_free(struct CinfRing *r);

/*
 Number of points; 0 for a null handle.

 # Safety
 `p` is null or a live handle.
 */
size_t cinf_points_count(const struct CinfPoints *p);

/*
 Copies the coordinates of point `index` into `out`, which has room for
 `len` values; `len` must equal the arity of the ring.

 # Safety
 `p` is a live handle; `out` has room for `len` values.
 */
enum CinfStatus cinf_points_get(const struct CinfPoints *p, size_t index, double *out, size_t len);

/*
 # Safety
 `p` is null or a live handle, not used afterwards.
 */
void cinf_points_free(struct CinfPoints *p);

/*
 Parses workspace text and writes its canonical form.

 # Safety
 `src` is a NUL-terminated string; `out` is writable.
 */
enum CinfStatus cinf_workspace_echo(const char *src, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CINFRING_H */
