#ifndef LOWLYING_H
#define LOWLYING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LlReduction {
  LL_REDUCTION_GOOD = 0,
  LL_REDUCTION_SPLIT_MULTIPLICATIVE = 1,
  LL_REDUCTION_NONSPLIT_MULTIPLICATIVE = 2,
  LL_REDUCTION_ADDITIVE = 3,
} LlReduction;

typedef enum LlStatus {
  LL_STATUS_OK = 0,
  LL_STATUS_BAD_REDUCTION = 1,
  LL_STATUS_NONMINIMAL_MODEL = 2,
  LL_STATUS_INVALID_CURVE = 3,
  LL_STATUS_OUT_OF_MEMORY = 4,
  LL_STATUS_CONDUCTOR_CLASH = 5,
  LL_STATUS_EMPTY_FAMILY = 6,
  LL_STATUS_INSUFFICIENT_COEFFICIENTS = 7,
  LL_STATUS_ILL_CONDITIONED = 8,
  LL_STATUS_RANK_OVERFLOW = 9,
  LL_STATUS_ENUMERATION_BOUND_TOO_SMALL = 10,
  LL_STATUS_INDEX_PRIME = 11,
  LL_STATUS_CONFIG_ERROR = 12,
  LL_STATUS_CACHE_CORRUPTION = 13,
  LL_STATUS_IO = 14,
  LL_STATUS_NULL_POINTER = 15,
  LL_STATUS_OUT_OF_RANGE = 16,
  LL_STATUS_PANIC = 17,
} LlStatus;

/**
 * Weight on conductors for character families.
 */
typedef enum LlWeight {
  LL_WEIGHT_SMOOTH_BUMP = 0,
  LL_WEIGHT_SHARP = 1,
} LlWeight;

/**
 * Opaque elliptic curve.
 */
typedef struct LlCurve LlCurve;

/**
 * Opaque character family.
 */
typedef struct LlFamily LlFamily;

/**
 * Opaque list of cubic fields.
 */
typedef struct LlFieldList LlFieldList;

typedef struct LlDensityReport {
  double conductor_term;
  double s1;
  double s2;
  double total;
  double predicted;
  double family_size;
  double l_param;
  double error_budget;
  /**
   * 0 for unitary, 1 for orthogonal.
   */
  int32_t symmetry;
} LlDensityReport;

typedef struct LlCubicField {
  int64_t a;
  int64_t b;
  int64_t c;
  int64_t disc_field;
  int64_t index_sq;
  /**
   * 1 when totally real.
   */
  int32_t totally_real;
} LlCubicField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *ll_last_error_message(void);

/**
 * Builds a curve from Weierstrass coefficients. `rank < 0` means unknown.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum LlStatus ll_curve_new(int64_t a1,
                           int64_t a2,
                           int64_t a3,
                           int64_t a4,
                           int64_t a6,
                           uint64_t conductor,
                           int32_t rank,
                           struct LlCurve **out);

/**
 * Built-in curve by label: "11a1", "37a1" or "389a1".
 *
 * # Safety
 * `label` must be a NUL-terminated string; `out` must be writable.
 */
enum LlStatus ll_curve_builtin(const char *label, struct LlCurve **out);

/**
 * # Safety
 * `curve` must come from `ll_curve_new`/`ll_curve_builtin` or be null.
 */
void ll_curve_free(struct LlCurve *curve);

/**
 * Reduction type and trace of Frobenius at a prime.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LlStatus ll_curve_local_data(const struct LlCurve *curve,
                                  uint64_t p,
                                  enum LlReduction *reduction,
                                  int64_t *a_p);

/**
 * `sum_{p <= x} a_f(p^2) log p`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LlStatus ll_curve_theta(const struct LlCurve *curve, double x, double *out);

/**
 * Analytic rank of the curve itself and its root number.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LlStatus ll_curve_analytic_rank(const struct LlCurve *curve,
                                     uint32_t *order,
                                     double *root_number);

/**
 * Primitive order-`l` characters with conductor prime to `curve_conductor`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LlStatus ll_family_new(uint32_t l,
                            double x,
                            uint64_t curve_conductor,
                            enum LlWeight weight,
                            struct LlFamily **out);

/**
 * # Safety
 * `family` must come from `ll_family_new` or be null.
 */
void ll_family_free(struct LlFamily *family);

/**
 * Number of characters; 0 for a null handle.
 *
 * # Safety
 * `family` must be a valid handle or null.
 */
uintptr_t ll_family_len(const struct LlFamily *family);

/**
 * Conductor and weight of character `index`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LlStatus ll_family_member(const struct LlFamily *family,
                               uintptr_t index,
                               uint64_t *conductor,
                               double *weight);

/**
 * `chi(n)` as an exponent `e` with `chi(n) = exp(2 pi i e / l)`, or -1 when
 * `chi(n) = 0`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LlStatus ll_family_eval(const struct LlFamily *family,
                             uintptr_t index,
                             uint64_t n,
                             int32_t *exponent);

/**
 * Weighted family average of the one-level density over order-`l` twists.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LlStatus ll_density_cyclic(const struct LlCurve *curve,
                                uint32_t l,
                                double x,
                                double sigma,
                                enum LlWeight weight,
                                struct LlDensityReport *out);

/**
 * Average of the one-level density over S3 cubic fields with `|D_F| <= x`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LlStatus ll_density_cubic(const struct LlCurve *curve,
                               double x,
                               double sigma,
                               struct LlDensityReport *out);

/**
 * S3 cubic fields with `|D_F| <= x` and discriminant prime to `conductor`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LlStatus ll_fields_new(double x, uint64_t conductor, struct LlFieldList **out);

/**
 * # Safety
 * `list` must come from `ll_fields_new` or be null.
 */
void ll_fields_free(struct LlFieldList *list);

/**
 * # Safety
 * `list` must be a valid handle or null.
 */
uintptr_t ll_fields_len(const struct LlFieldList *list);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LlStatus ll_fields_get(const struct LlFieldList *list,
                            uintptr_t index,
                            struct LlCubicField *out);

/**
 * `phi_hat(0) / phi(0)` for the Fejer pair; NaN unless `0 < sigma <= 1`.
 */
double ll_rank_bound_cyclic(double sigma);

/**
 * `(phi_hat(0) + phi(0)/2) / phi(0)` for the Fejer pair; NaN unless `0 < sigma <= 1`.
 */
double ll_rank_bound_sd(double sigma);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOWLYING_H */
