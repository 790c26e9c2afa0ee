/*
 * Rates of distributed MIMO with oblivious antennas over the circulant
 * Wyner channel. Link capacities are doubles; INFINITY is an ideal link.
 */

#ifndef OMIMO_H
#define OMIMO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Scheme identifiers accepted wherever a `uint32_t scheme` is taken.
 */
typedef enum OmimoScheme {
  OMIMO_SCHEME_UPPER_BOUND = 0,
  OMIMO_SCHEME_INDEPENDENT_MESSAGES = 1,
  OMIMO_SCHEME_QUANTIZED_WATERFILLING = 2,
  OMIMO_SCHEME_ELEMENTARY_COMPRESSION = 3,
  OMIMO_SCHEME_DISTRIBUTED_COMPRESSION = 4,
  OMIMO_SCHEME_IM_EC = 5,
  OMIMO_SCHEME_IM_DC = 6,
  OMIMO_SCHEME_QW_EC = 7,
  OMIMO_SCHEME_QW_DC = 8,
} OmimoScheme;

typedef enum OmimoStatus {
  OMIMO_STATUS_OK = 0,
  OMIMO_STATUS_NULL_POINTER = 1,
  OMIMO_STATUS_INVALID_ARGUMENT = 2,
  OMIMO_STATUS_DOMAIN = 3,
  OMIMO_STATUS_DEGENERATE = 4,
  OMIMO_STATUS_NON_CONVERGENCE = 5,
  OMIMO_STATUS_PRECONDITION = 6,
  OMIMO_STATUS_IO = 7,
  OMIMO_STATUS_PANIC = 8,
} OmimoStatus;

/**
 * Opaque channel handle.
 */
typedef struct OmimoChannel OmimoChannel;

/**
 * Opaque sweep result handle.
 */
typedef struct OmimoSweep OmimoSweep;

typedef struct OmimoWaterfill {
  double mu;
  double rate;
  double power_used;
  /**
   * Active band is `[0, band_edge] U [1 - band_edge, 1)`; zero when empty.
   */
  double band_edge;
  uint64_t iterations;
} OmimoWaterfill;

typedef struct OmimoRate {
  double rate;
  bool has_printed_bound;
  double printed_bound;
  /**
   * 1 when the printed equality conditions hold, 0 when not, -1 when the
   * scheme has no printed bound.
   */
  int32_t bound_tight;
  bool has_fixed_point;
  double fixed_point;
} OmimoRate;

typedef struct OmimoSweepRow {
  double alpha2;
  double p_db;
  double c;
  double cprime;
  uint32_t scheme;
  struct OmimoRate result;
} OmimoSweepRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Null-terminated message for the last failing call on this thread; empty
 * after a successful call. Valid until the next call on the same thread.
 */
const char *omimo_last_error_message(void);

/**
 * Library version as a static null-terminated string.
 */
const char *omimo_version(void);

/**
 * Creates a channel with interference gain `alpha` in `[0, 1]`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum OmimoStatus omimo_channel_new(double alpha, struct OmimoChannel **out);

/**
 * Creates a channel from the interference power `alpha^2` in `[0, 1]`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum OmimoStatus omimo_channel_from_alpha2(double alpha2, struct OmimoChannel **out);

/**
 * # Safety
 * `ch` must be null or a handle from `omimo_channel_new`/`_from_alpha2` not
 * yet freed.
 */
void omimo_channel_free(struct OmimoChannel *ch);

/**
 * Spectral gain `G(f)` for `f` in `[0, 1)`.
 *
 * # Safety
 * `ch` must be a live channel handle and `out` a valid pointer.
 */
enum OmimoStatus omimo_channel_gain(const struct OmimoChannel *ch, double f, double *out);

/**
 * Waterfilling over the density `kappa G / (u + v G)` with power `power`.
 *
 * # Safety
 * `ch` must be a live channel handle and `out` a valid pointer.
 */
enum OmimoStatus omimo_waterfill(const struct OmimoChannel *ch,
                                 double kappa,
                                 double u,
                                 double v,
                                 double power,
                                 struct OmimoWaterfill *out);

/**
 * Waterfilling rate of the plain channel, `R_WF(P)`.
 *
 * # Safety
 * `ch` must be a live channel handle and `out` a valid pointer.
 */
enum OmimoStatus omimo_rate_wf(const struct OmimoChannel *ch, double power, double *out);

/**
 * Rate of `scheme` (an `OmimoScheme` value) at power `power` and link
 * capacities `c`, `cprime`.
 *
 * # Safety
 * `ch` must be a live channel handle and `out` a valid pointer.
 */
enum OmimoStatus omimo_scheme_rate(const struct OmimoChannel *ch,
                                   uint32_t scheme,
                                   double power,
                                   double c,
                                   double cprime,
                                   struct OmimoRate *out);

/**
 * Evaluates the grid `alpha2 x p_db x c x cprime`. With `n_schemes == 0`
 * every scheme applicable at each point is evaluated; otherwise exactly the
 * listed ones. Rows are ordered by alpha2, p_db, c, cprime, scheme.
 *
 * # Safety
 * Each array must hold at least its stated number of elements (or be null
 * when the count is zero); `out` must be a valid pointer.
 */
enum OmimoStatus omimo_sweep_new(const double *alpha2,
                                 size_t n_alpha2,
                                 const double *p_db,
                                 size_t n_p_db,
                                 const double *c,
                                 size_t n_c,
                                 const double *cprime,
                                 size_t n_cprime,
                                 const uint32_t *schemes,
                                 size_t n_schemes,
                                 struct OmimoSweep **out);

/**
 * Number of rows in a sweep; zero for a null handle.
 *
 * # Safety
 * `sweep` must be null or a live sweep handle.
 */
size_t omimo_sweep_len(const struct OmimoSweep *sweep);

/**
 * Copies row `index` of a sweep into `out`.
 *
 * # Safety
 * `sweep` must be a live sweep handle and `out` a valid pointer.
 */
enum OmimoStatus omimo_sweep_row(const struct OmimoSweep *sweep,
                                 size_t index,
                                 struct OmimoSweepRow *out);

/**
 * Renders a sweep as CSV. The string is owned by the caller and released
 * with `omimo_string_free`.
 *
 * # Safety
 * `sweep` must be a live sweep handle and `out` a valid pointer.
 */
enum OmimoStatus omimo_sweep_to_csv(const struct OmimoSweep *sweep, char **out);

/**
 * # Safety
 * `sweep` must be null or a live sweep handle.
 */
void omimo_sweep_free(struct OmimoSweep *sweep);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void omimo_string_free(char *s);

/**
 * Writes `figure2.csv` and `README.md` for the rates-versus-SNR dataset into
 * `dir`, creating it if needed. `rows_out` may be null.
 *
 * # Safety
 * `dir` must be a valid null-terminated UTF-8 path.
 */
enum OmimoStatus omimo_figure2_write(const char *dir, size_t *rows_out);

/**
 * Converts decibels to linear power.
 */
double omimo_db_to_linear(double db);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OMIMO_H */
