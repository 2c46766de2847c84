#ifndef LEVCOOL_H
#define LEVCOOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result code of every fallible call.
 */
typedef enum LcStatus {
  LC_STATUS_OK = 0,
  LC_STATUS_NULL_POINTER = 1,
  LC_STATUS_INVALID_ARGUMENT = 2,
  LC_STATUS_CONFIG_ERROR = 3,
  LC_STATUS_NOT_COOLING = 4,
  LC_STATUS_NO_COOLING_WINDOW = 5,
  LC_STATUS_UNSTABLE = 6,
  LC_STATUS_NUMERIC_FAILURE = 7,
  LC_STATUS_IO_ERROR = 8,
  LC_STATUS_PANIC = 9,
} LcStatus;

/**
 * Detuning optimizer selector for [`lc_optimal_detuning`].
 */
typedef enum LcDetuningMode {
  LC_DETUNING_MODE_CLOSED_FORM = 0,
  LC_DETUNING_MODE_NUMERIC = 1,
} LcDetuningMode;

/**
 * Stability criterion selector for [`lc_stability`].
 */
typedef enum LcCriterion {
  LC_CRITERION_SINGLE = 0,
  LC_CRITERION_SINGLE_OPTIMAL = 1,
  LC_CRITERION_COUPLED_EFFECTIVE = 2,
  LC_CRITERION_COUPLED_BOUND = 3,
} LcCriterion;

/**
 * Opaque parameter handle.
 */
typedef struct LcParams LcParams;

/**
 * Model parameters in units of the trap frequency.
 */
typedef struct LcParamValues {
  double detuning2;
  double detuning3;
  double kappa;
  double kappa3;
  double tunneling;
  double coupling;
  double gamma;
  double gamma_sc;
  double n_th;
} LcParamValues;

typedef struct LcCoolingReport {
  double a_minus;
  double a_plus;
  double gamma_opt;
  double spring_shift;
  /**
   * Quantum-noise occupancy; NaN when not cooling.
   */
  double n_q;
  /**
   * Recoil occupancy; NaN when not cooling.
   */
  double n_c;
  /**
   * Total occupancy; NaN when not cooling.
   */
  double n_f;
  bool cooling;
} LcCoolingReport;

typedef struct LcEffectiveParams {
  double eta;
  double coupling_eff;
  double kappa_eff;
  double detuning_eff;
  /**
   * All validity diagnostics of the reduction hold.
   */
  bool regime_ok;
} LcEffectiveParams;

typedef struct LcStabilityVerdict {
  bool stable;
  /**
   * Positive when stable, `+inf` when the criterion places no bound.
   */
  double margin;
} LcStabilityVerdict;

typedef struct LcOccupancy {
  double n_phonon;
  double max_real_eigenvalue;
  double residual;
} LcOccupancy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *lc_version(void);

/**
 * Message for the last failed call on this thread, or null. The pointer stays
 * valid until the next call into the library on the same thread.
 */
const char *lc_last_error_message(void);

/**
 * Validates `values` and stores a new handle in `*out`.
 *
 * # Safety
 * `values` must point to a readable `LcParamValues`; `out` to a writable
 * handle slot.
 */
enum LcStatus lc_params_new(const struct LcParamValues *values, struct LcParams **out);

/**
 * Parses a model description in the CLI config format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` a writable handle slot.
 */
enum LcStatus lc_params_from_config(const char *text, struct LcParams **out);

/**
 * Reads a model description from a config file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` a writable handle slot.
 */
enum LcStatus lc_params_from_config_file(const char *path, struct LcParams **out);

/**
 * Copies the parameter values out of a handle.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum LcStatus lc_params_get(const struct LcParams *params, struct LcParamValues *out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `params` must be null or a handle not yet freed.
 */
void lc_params_free(struct LcParams *params);

/**
 * Force-noise spectral density at frequency `omega`.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum LcStatus lc_spectral_density(const struct LcParams *params, double omega, double *out);

/**
 * Evaluates the spectral density at `n` frequencies.
 *
 * # Safety
 * `omega` must be readable and `out` writable for `n` doubles.
 */
enum LcStatus lc_spectrum(const struct LcParams *params,
                          const double *omega,
                          size_t n,
                          double *out);

/**
 * Rates and occupancies. Fills `out` and returns `LC_STATUS_OK` even when the
 * net damping is not positive; check `out->cooling`.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum LcStatus lc_cooling_report(const struct LcParams *params, struct LcCoolingReport *out);

/**
 * Cooling-mode detuning minimizing the final occupancy.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum LcStatus lc_optimal_detuning(const struct LcParams *params,
                                  enum LcDetuningMode mode,
                                  double *out);

/**
 * Cooling-mode detuning maximizing the net damping.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum LcStatus lc_max_damping_detuning(const struct LcParams *params, double *out);

/**
 * Parameters of the reduced single-mode model.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum LcStatus lc_effective_params(const struct LcParams *params, struct LcEffectiveParams *out);

/**
 * Closed-form stability verdict under the selected criterion.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum LcStatus lc_stability(const struct LcParams *params,
                           enum LcCriterion criterion,
                           struct LcStabilityVerdict *out);

/**
 * Stability from the eigenvalues of the full linear drift matrix.
 *
 * # Safety
 * `params` must be a live handle; `stable` and `max_real` must be writable.
 */
enum LcStatus lc_eigen_stability(const struct LcParams *params, bool *stable, double *max_real);

/**
 * Steady-state phonon number from the covariance of the full linear model.
 * Fails with `LC_STATUS_UNSTABLE` when the drift matrix is unstable.
 *
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum LcStatus lc_lyapunov_occupancy(const struct LcParams *params, struct LcOccupancy *out);

/**
 * Recoil heating rate over the trap frequency for a dielectric sphere.
 * `radius` and `wavelength` share any length unit.
 *
 * # Safety
 * `out` must be writable.
 */
enum LcStatus lc_gamma_sc(double radius, double epsilon, double wavelength, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEVCOOL_H */
