#ifndef CANTORLAB_H
#define CANTORLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_INVALID_ARGUMENT = 1,
  CL_STATUS_BUDGET_EXCEEDED = 2,
  CL_STATUS_PRECONDITION = 3,
  CL_STATUS_NUMERIC = 4,
  CL_STATUS_NULL_POINTER = 5,
  CL_STATUS_PANIC = 6,
} ClStatus;

// Exact finite point set on the line.
typedef struct ClPointSet ClPointSet;

// Exact trigonometric polynomial.
typedef struct ClTrigPoly ClTrigPoly;

typedef struct ClBoundsReport {
  double alpha;
  double lower_elementary;
  double lower_l2;
  double lower_l3;
  double upper;
  double c;
  double c_prime;
} ClBoundsReport;

typedef struct ClVerifyRow {
  uint32_t k;
  double lhs;
  double envelope;
  double ratio;
  double error_bound;
} ClVerifyRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *cl_last_error(void);

// # Safety
// `s` must come from this library and not have been freed.
void cl_string_free(char *s);

// # Safety
// Output pointers must be valid for writes.
enum ClStatus cl_constants(double *c, double *c_prime);

// `P_K(s) = prod_{l<K} cos^2(2 pi 4^l s)`.
double cl_pk_eval(uint32_t k, double s);

// Transform of the Cantor–Lebesgue measure at `s`, truncated to `tol`.
//
// # Safety
// Output pointers must be valid for writes.
enum ClStatus cl_lambda_hat(double s, double tol, double *re, double *im);

// Exact `int_0^1 P_K^p` as a string `"p/q"` (release with
// [`cl_string_free`]) and as a double.
//
// # Safety
// Output pointers must be valid for writes.
enum ClStatus cl_pk_power_integral(uint32_t k, uint32_t p, char **exact, double *value);

// # Safety
// `out` must be valid for writes.
enum ClStatus cl_bounds_report(double alpha, struct ClBoundsReport *out);

// Depth-`depth` points of the set with the given base and digits.
//
// # Safety
// `digits` must point to `n_digits` values; `out` must be valid for writes.
enum ClStatus cl_digit_points(uint32_t base,
                              const uint32_t *digits,
                              size_t n_digits,
                              uint32_t depth,
                              struct ClPointSet **out);

// `C + (t_num / t_den) C` at depth `depth`.
//
// # Safety
// `out` must be valid for writes.
enum ClStatus cl_sumset(int64_t t_num, int64_t t_den, uint32_t depth, struct ClPointSet **out);

// `P_x(C x C)` for `x = x_num / x_den` at depth `depth`.
//
// # Safety
// `out` must be valid for writes.
enum ClStatus cl_project(int64_t x_num, int64_t x_den, uint32_t depth, struct ClPointSet **out);

// # Safety
// `set` must be a live handle or NULL.
size_t cl_point_set_len(const struct ClPointSet *set);

// Copies up to `cap` points, increasing, into `buf`; `written` receives
// the number copied.
//
// # Safety
// `set` must be a live handle, `buf` valid for `cap` writes.
enum ClStatus cl_point_set_values(const struct ClPointSet *set,
                                  double *buf,
                                  size_t cap,
                                  size_t *written);

// Number of base-`base` cells of level `m` meeting the set.
//
// # Safety
// `set` must be a live handle, `count` valid for writes.
enum ClStatus cl_point_set_box_count(const struct ClPointSet *set,
                                     uint32_t base,
                                     uint32_t m,
                                     uint64_t *count);

// Least-squares box dimension over base-4 levels `m_lo..=m_hi`.
//
// # Safety
// `set` must be a live handle; outputs valid for writes.
enum ClStatus cl_point_set_box_dim(const struct ClPointSet *set,
                                   uint32_t m_lo,
                                   uint32_t m_hi,
                                   double *slope,
                                   double *r_squared);

// # Safety
// `set` must come from this library and not have been freed, or be NULL.
void cl_point_set_free(struct ClPointSet *set);

// Coefficients of `P_K`.
//
// # Safety
// `out` must be valid for writes.
enum ClStatus cl_pk_coefficients(uint32_t k, struct ClTrigPoly **out);

// # Safety
// `p` must be a live handle or NULL.
size_t cl_trig_poly_len(const struct ClTrigPoly *p);

// Term `i` in increasing frequency order.
//
// # Safety
// `p` must be a live handle; outputs valid for writes.
enum ClStatus cl_trig_poly_term(const struct ClTrigPoly *p,
                                size_t i,
                                int64_t *frequency,
                                double *coefficient);

// # Safety
// `p` must be a live handle; outputs valid for writes.
enum ClStatus cl_trig_poly_eval(const struct ClTrigPoly *p, double s, double *re, double *im);

// # Safety
// `p` must come from this library and not have been freed, or be NULL.
void cl_trig_poly_free(struct ClTrigPoly *p);

// Rows `k_lo..=k_hi` of a named estimate check with default settings and
// the Cantor–Lebesgue test measure. `rows` must hold `k_hi - k_lo + 1`
// entries.
//
// # Safety
// `estimate` must be a NUL-terminated string; `rows` valid for `cap`
// writes.
enum ClStatus cl_verify(const char *estimate,
                        uint32_t k_lo,
                        uint32_t k_hi,
                        struct ClVerifyRow *rows,
                        size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CANTORLAB_H */
