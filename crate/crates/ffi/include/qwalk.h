/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef QWALK_H
#define QWALK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum QwStatus {
  QW_STATUS_OK = 0,
  QW_STATUS_NULL_POINTER = 1,
  /**
   * bad step set, weight, ratio or other argument
   */
  QW_STATUS_INVALID_INPUT = 2,
  /**
   * quadrature, series or rationality failure
   */
  QW_STATUS_NUMERIC = 3,
  /**
   * z is not in H at the requested resolution
   */
  QW_STATUS_NOT_RATIONAL = 4,
  /**
   * a panic was caught at the boundary
   */
  QW_STATUS_INTERNAL = 5,
} QwStatus;

/**
 * Model classes reported by `qw_classify`.
 */
typedef enum QwModelKind {
  QW_MODEL_KIND_TRIVIAL = 0,
  QW_MODEL_KIND_HALF_PLANE_REDUCIBLE = 1,
  QW_MODEL_KIND_SINGULAR = 2,
  QW_MODEL_KIND_NON_SINGULAR = 3,
} QwModelKind;

/**
 * Opaque table of exact counts.
 */
typedef struct QwCountTable QwCountTable;

/**
 * Opaque model at a weight in H.
 */
typedef struct QwModel QwModel;

/**
 * Opaque step set.
 */
typedef struct QwStepSet QwStepSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *qw_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qw_version(void);

/**
 * Parses a comma-separated list of compass steps, e.g. `"NE,W,S"`.
 *
 * # Safety
 * `steps` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QwStatus qw_stepset_parse(const char *steps, struct QwStepSet **out);

/**
 * # Safety
 * `s` must come from `qw_stepset_parse` and not be used afterwards.
 */
void qw_stepset_free(struct QwStepSet *s);

/**
 * Class of the model and order of its group: `n` when finite, `-1` when
 * it exceeds the search bound, `0` when the group is not defined.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_classify(const struct QwStepSet *s,
                          enum QwModelKind *out_kind,
                          int32_t *out_group_order);

/**
 * Exact counts up to length `depth`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_count_table_new(const struct QwStepSet *s,
                                 size_t depth,
                                 struct QwCountTable **out);

/**
 * Number of walks of length `n` ending at `(i, j)`, as a double.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_count_table_get(const struct QwCountTable *t,
                                 size_t i,
                                 size_t j,
                                 size_t n,
                                 double *out);

/**
 * # Safety
 * `t` must come from `qw_count_table_new` and not be used afterwards.
 */
void qw_count_table_free(struct QwCountTable *t);

/**
 * Model at weight `z`; fails with `NotRational` unless `w3/w2` is within
 * `tol` of some `k/l` with `l <= lmax`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_model_new(const struct QwStepSet *s,
                           double z,
                           uint32_t lmax,
                           double tol,
                           struct QwModel **out);

/**
 * Model at the weight where `w3/w2 = k/l`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_model_new_pinned(const struct QwStepSet *s,
                                  uint32_t k,
                                  uint32_t l,
                                  struct QwModel **out);

/**
 * # Safety
 * `m` must come from a `qw_model_new*` call and not be used afterwards.
 */
void qw_model_free(struct QwModel *m);

/**
 * Weight and detected rotation number `k/l`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_model_weight(const struct QwModel *m, double *z, uint32_t *k, uint32_t *l);

/**
 * Periods: `w1 = i * w1_im`, real `w2`, and the shift `w3`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_model_periods(const struct QwModel *m, double *w1_im, double *w2, double *w3);

/**
 * `Q(0,0;z)` from the principal-part series.
 *
 * # Safety
 * Pointers must be valid; `est_tail` may be NULL.
 */
enum QwStatus qw_model_q00(const struct QwModel *m, double *value, double *est_tail);

/**
 * The branch `branch` of `Q(x,0;z)`; branch 1 is the power series.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_model_evaluate_qx0(const struct QwModel *m,
                                    double x_re,
                                    double x_im,
                                    int64_t branch,
                                    double *out_re,
                                    double *out_im);

/**
 * Kreweras excursions `(W - W^4/4) / (2z)` with `W = z (2 + W^3)`.
 *
 * # Safety
 * `out` must be valid.
 */
enum QwStatus qw_kreweras_q00_closed(double z, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWALK_H */
