#ifndef HEIGHTBOUND_H
#define HEIGHTBOUND_H

/* Generated by cbindgen from src/lib.rs. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HbFormat {
  HB_FORMAT_JSONL = 0,
  HB_FORMAT_CSV = 1,
} HbFormat;

typedef enum HbStatus {
  HB_OK = 0,
  HB_NULL_POINTER = 1,
  HB_INVALID_ARGUMENT = 2,
  HB_PARSE = 3,
  HB_SINGULAR = 4,
  HB_NOT_ON_CURVE = 5,
  HB_PRECISION = 6,
  HB_IO = 7,
  HB_INTERNAL = 8,
} HbStatus;

/**
 * Minimal model of an elliptic curve over Q.
 */
typedef struct HbCurve HbCurve;

/**
 * Reports from a corpus run.
 */
typedef struct HbReports HbReports;

/**
 * A real number known to lie in [mid - rad, mid + rad]. The radius
 * covers the rounding of the midpoint to double.
 */
typedef struct HbBall {
  double mid;
  double rad;
} HbBall;

/**
 * Conductor norms as logarithms.
 */
typedef struct HbConductor {
  struct HbBall log_n0;
  struct HbBall log_nst;
  struct HbBall log_nuns;
} HbConductor;

/**
 * Analytic invariants of the minimal model.
 */
typedef struct HbFaltings {
  struct HbBall hf_plus;
  struct HbBall hf_classical;
  struct HbBall tau_re;
  struct HbBall tau_im;
  struct HbBall rho;
  /**
   * 16 hF+ + 39 - rho^-2
   */
  struct HbBall matrix_lemma_slack;
  uint32_t bits;
} HbFaltings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or "" after success.
 * The pointer stays valid until the next call on this thread.
 */
const char *hb_last_error(void);

/**
 * Library version as a static string.
 */
const char *hb_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void hb_string_free(char *s);

/**
 * Builds the minimal model of the curve with Weierstrass coefficients
 * a1, a2, a3, a4, a6 given as rationals ("3", "-7/2").
 *
 * # Safety
 * `ainvs` must point to five readable C strings; `out_curve` must be writable.
 */
enum HbStatus hb_curve_new(const char *const *ainvs, struct HbCurve **out_curve);

/**
 * # Safety
 * `curve` must be null or a handle from [`hb_curve_new`] not yet freed.
 */
void hb_curve_free(struct HbCurve *curve);

/**
 * Minimal-model coefficients as "[a1,a2,a3,a4,a6]".
 *
 * # Safety
 * `curve` must be a live handle; `out_text` must be writable.
 */
enum HbStatus hb_curve_minimal_ainvs(const struct HbCurve *curve, char **out_text);

/**
 * Minimal discriminant as a decimal string.
 *
 * # Safety
 * `curve` must be a live handle; `out_text` must be writable.
 */
enum HbStatus hb_curve_discriminant(const struct HbCurve *curve, char **out_text);

/**
 * # Safety
 * `curve` must be a live handle; `out_norms` must be writable.
 */
enum HbStatus hb_curve_conductor(const struct HbCurve *curve, struct HbConductor *out_norms);

/**
 * Stable Faltings height and period data, doubling working precision
 * up to `max_bits` until the radius of hF+ is at most `tol`.
 *
 * # Safety
 * `curve` must be a live handle; `out_faltings` must be writable.
 */
enum HbStatus hb_curve_faltings(const struct HbCurve *curve,
                                double tol,
                                uint32_t max_bits,
                                struct HbFaltings *out_faltings);

/**
 * Canonical height of the affine point (x, y) on the minimal model,
 * normalized as (1/2) lim 4^-n h(x(2^n P)).
 *
 * # Safety
 * `curve` must be a live handle; `x`, `y` readable C strings;
 * `out_height` writable.
 */
enum HbStatus hb_curve_canonical_height(const struct HbCurve *curve,
                                        const char *x,
                                        const char *y,
                                        double tol,
                                        struct HbBall *out_height);

/**
 * Upper bound for the Mordell-Weil rank of the curve over Q.
 *
 * # Safety
 * `curve` must be a live handle; `out_bound` must be writable.
 */
enum HbStatus hb_curve_rank_bound(const struct HbCurve *curve, struct HbBall *out_bound);

/**
 * Runs every check over a corpus file with `jobs` worker threads.
 *
 * # Safety
 * `path` must be a readable C string; `out_reports` writable.
 */
enum HbStatus hb_run_corpus(const char *path,
                            enum HbFormat format,
                            double tol,
                            uint32_t jobs,
                            struct HbReports **out_reports);

/**
 * # Safety
 * `reports` must be a live handle from [`hb_run_corpus`].
 */
size_t hb_reports_len(const struct HbReports *reports);

/**
 * Serializes the reports, one per line for JSONL or with a header row
 * for CSV.
 *
 * # Safety
 * `reports` must be a live handle; `out_text` must be writable.
 */
enum HbStatus hb_reports_emit(const struct HbReports *reports,
                              enum HbFormat format,
                              char **out_text);

/**
 * # Safety
 * `reports` must be null or a handle from [`hb_run_corpus`] not yet freed.
 */
void hb_reports_free(struct HbReports *reports);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEIGHTBOUND_H */
