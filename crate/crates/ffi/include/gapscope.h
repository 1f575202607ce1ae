#ifndef GAPSCOPE_H
#define GAPSCOPE_H

#include <stddef.h>
#include <stdint.h>

/**
 * Bumped on every incompatible change of the functions below.
 */
#define GS_ABI_VERSION 1

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_DOMAIN = 1,
  GS_STATUS_AMBIGUOUS = 2,
  GS_STATUS_PARSE = 3,
  GS_STATUS_VALIDATION = 4,
  GS_STATUS_CONSISTENCY = 5,
  GS_STATUS_NULL_POINTER = 6,
  GS_STATUS_INVALID_UTF8 = 7,
  GS_STATUS_PANIC = 8,
} GsStatus;

/**
 * Gaps and clusters of an orbit segment.
 */
typedef struct GsGapReport GsGapReport;

/**
 * An interval exchange transformation.
 */
typedef struct GsIet GsIet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t gs_abi_version(void);

/**
 * The message of the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *gs_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void gs_string_free(char *s);

/**
 * Builds an IET from `d` lengths and the 1-based images `pi(1) .. pi(d)`.
 *
 * # Safety
 * `lengths` and `images` must point to `d` readable values.
 */
enum GsStatus gs_iet_new(const double *lengths,
                         const uint32_t *images,
                         size_t d,
                         struct GsIet **out);

/**
 * Builds an IET from its JSON description, lengths may be surds.
 *
 * # Safety
 * `json` must be a nul-terminated string.
 */
enum GsStatus gs_iet_from_json(const char *json, struct GsIet **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum GsStatus gs_rotation_new(double theta, struct GsIet **out);

/**
 * # Safety
 * `t` must be null or a handle from this library, freed at most once.
 */
void gs_iet_free(struct GsIet *t);

/**
 * Number of intervals, 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live handle.
 */
size_t gs_iet_d(const struct GsIet *t);

/**
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum GsStatus gs_iet_apply(const struct GsIet *t, double x, double *out);

/**
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum GsStatus gs_iet_inverse(const struct GsIet *t, struct GsIet **out);

/**
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum GsStatus gs_gap_report(const struct GsIet *t, size_t n, double eps, struct GsGapReport **out);

/**
 * # Safety
 * `r` must be null or a handle from this library, freed at most once.
 */
void gs_gap_report_free(struct GsGapReport *r);

/**
 * Number of distinct gap lengths, 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t gs_gap_report_num_clusters(const struct GsGapReport *r);

/**
 * The `k`-th distinct length (increasing) and its multiplicity.
 *
 * # Safety
 * `r` must be a live handle, `length` and `count` writable.
 */
enum GsStatus gs_gap_report_cluster(const struct GsGapReport *r,
                                    size_t k,
                                    double *length,
                                    size_t *count);

/**
 * Number of gaps (distinct orbit points), 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t gs_gap_report_num_gaps(const struct GsGapReport *r);

/**
 * Copies up to `cap` gaps into `buf`; writes the number copied to `len`.
 *
 * # Safety
 * `buf` must have room for `cap` values; `len` must be writable.
 */
enum GsStatus gs_gap_report_gaps(const struct GsGapReport *r, double *buf, size_t cap, size_t *len);

/**
 * The whole report as JSON.
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
enum GsStatus gs_gap_report_json(const struct GsGapReport *r, char **out);

/**
 * The three-gap prediction for the surd `alpha` at level `n`, as JSON.
 *
 * # Safety
 * `alpha` must be a nul-terminated string and `out` writable.
 */
enum GsStatus gs_three_gap_predict(const char *alpha, uint64_t n, char **out);

/**
 * Consecutive Farey fractions `a1/q1 <= alpha <= a2/q2` of order `n`; both
 * sides are equal when `alpha` is itself a fraction of order `n`.
 *
 * # Safety
 * `alpha` must be a nul-terminated string; the four outputs writable.
 */
enum GsStatus gs_farey_neighbors(const char *alpha,
                                 uint64_t n,
                                 uint64_t *a1,
                                 uint64_t *q1,
                                 uint64_t *a2,
                                 uint64_t *q2);

/**
 * # Safety
 * `out` must be writable.
 */
enum GsStatus gs_dilog(double x, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum GsStatus gs_limit_g(double z, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum GsStatus gs_avg_gap_rotation_exact(double a, double b, double z, uint64_t n, double *out);

/**
 * Writes up to three widths and heights and their number to `len`.
 *
 * # Safety
 * `alpha` must be a nul-terminated string; `widths` and `heights` must
 * have room for 3 values; `len` writable.
 */
enum GsStatus gs_zipper_torus(const char *alpha,
                              uint64_t n,
                              double *widths,
                              double *heights,
                              size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAPSCOPE_H */
