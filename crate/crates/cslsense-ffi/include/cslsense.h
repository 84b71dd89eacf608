#ifndef CSLSENSE_H
#define CSLSENSE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum {
  CSL_OK = 0,
  CSL_NULL_POINTER = 1,
  CSL_INVALID_ARGUMENT = 2,
  CSL_COMPUTE_ERROR = 3,
  CSL_BUFFER_TOO_SMALL = 4,
  CSL_PANIC = 5,
} CslStatus;

/**
 * Opaque sensing session: a fixed scenario, a fixed measurement operator,
 * and a deterministic per-trial random stream.
 */
typedef struct CslSession CslSession;

/**
 * Scenario description for a sensing session. Transmit powers are all one.
 */
typedef struct {
  /**
   * receive antenna count
   */
  uintptr_t m;
  /**
   * active primary user count
   */
  uintptr_t k;
  /**
   * monitored bandwidth, Hz
   */
  double w_hz;
  /**
   * per-user bandwidth, Hz
   */
  double b_hz;
  /**
   * Nyquist samples per segment
   */
  uintptr_t q;
  /**
   * segments per sensing period
   */
  uintptr_t l;
  /**
   * antenna correlation magnitude and phase
   */
  double rho_abs;
  double rho_phase;
  /**
   * per-antenna SNR in dB
   */
  double snr_db;
  /**
   * sub-Nyquist compression factor (must divide q)
   */
  uintptr_t compression;
  /**
   * sub-array bounds, 1-based, 1 <= i <= j <= m
   */
  uintptr_t i;
  uintptr_t j;
  /**
   * root seed for the operator and all trials
   */
  uint64_t seed;
} CslScenarioParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next
 * failing call; never null.
 */
const char *cslsense_last_error(void);

/**
 * Library version as a static string.
 */
const char *cslsense_version(void);

/**
 * Closed-form amplification of a single cross-correlation at shift `r`.
 */
CslStatus cslsense_gain_single_shift(uintptr_t i,
                                     uintptr_t j,
                                     int64_t r,
                                     double rho_abs,
                                     double rho_phase,
                                     double *out);

/**
 * Closed-form amplification of the shift-summed cross-correlation.
 */
CslStatus cslsense_gain_shift_sum(uintptr_t i,
                                  uintptr_t j,
                                  uintptr_t m,
                                  double rho_abs,
                                  double rho_phase,
                                  double *out);

/**
 * Peak singular value of the correlation block for sub-array (i, j) at
 * shift `r` inside an `m`-antenna array.
 */
CslStatus cslsense_sigma_max(uintptr_t i,
                             uintptr_t j,
                             int64_t r,
                             uintptr_t m,
                             double rho_abs,
                             double rho_phase,
                             double *out);

/**
 * Bounds on the stacked-block peak singular value at zero shift.
 */
CslStatus cslsense_bounds_zero_shift(uintptr_t i,
                                     uintptr_t j,
                                     double rho_abs,
                                     double rho_phase,
                                     double *out_lower,
                                     double *out_upper);

/**
 * Bounds in the rank-one shift range r >= j - i; the lower bound is exact.
 */
CslStatus cslsense_bounds_rank_one(uintptr_t i,
                                   uintptr_t j,
                                   int64_t r,
                                   double rho_abs,
                                   double rho_phase,
                                   double *out_lower,
                                   double *out_upper);

/**
 * Create a session. Returns null on invalid parameters; the reason is
 * available from `cslsense_last_error`. Free with `cslsense_session_free`.
 *
 * # Safety
 * `params` must be null or point to a valid `CslScenarioParams`.
 */
CslSession *cslsense_session_new(const CslScenarioParams *params);

/**
 * Number of bands the session senses; band statistics buffers must hold
 * this many values.
 *
 * # Safety
 * `session` must be null or a live handle from `cslsense_session_new`.
 */
uintptr_t cslsense_session_band_count(const CslSession *session);

/**
 * Run one sensing trial with the named recovery variant (for example
 * "mcslsacc" or "tmacsl"). Writes one energy statistic per band into
 * `stats`, and the indices of the truly occupied bands into `support`
 * (exactly k entries). Each call advances the trial counter, so repeated
 * calls walk a deterministic Monte Carlo stream.
 *
 * # Safety
 * `session` must be a live handle, `algorithm` a null-terminated string,
 * and the output pointers must reference buffers of the stated lengths.
 */
CslStatus cslsense_session_sense(CslSession *session,
                                 const char *algorithm,
                                 double *stats,
                                 uintptr_t stats_len,
                                 uintptr_t *support,
                                 uintptr_t support_len);

/**
 * Reset the per-trial stream so the next sense call repeats trial zero.
 *
 * # Safety
 * `session` must be null or a live handle from `cslsense_session_new`.
 */
CslStatus cslsense_session_reset(CslSession *session);

/**
 * Destroy a session created by `cslsense_session_new`. Null is a no-op.
 *
 * # Safety
 * `session` must be null or a live handle, and must not be used afterward.
 */
void cslsense_session_free(CslSession *session);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSLSENSE_H */
