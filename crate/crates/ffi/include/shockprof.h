#ifndef SHOCKPROF_H
#define SHOCKPROF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  SHOCKPROF_STATUS_OK = 0,
  SHOCKPROF_STATUS_INVALID_INPUT = 1,
  /**
   * The amplitude lies outside (3/4, 1).
   */
  SHOCKPROF_STATUS_NO_SHOCK = 2,
  SHOCKPROF_STATUS_DEGENERATE_CLASSIFICATION = 3,
  SHOCKPROF_STATUS_SINGULAR_LINEARIZATION = 4,
  SHOCKPROF_STATUS_NUMERICAL_FAILURE = 5,
  SHOCKPROF_STATUS_NULL_POINTER = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  SHOCKPROF_STATUS_PANIC = 7,
} ShockprofStatus;

typedef enum {
  SHOCKPROF_CAUSALITY_CLASS_ACAUSAL_NONREAL = 0,
  SHOCKPROF_CAUSALITY_CLASS_ACAUSAL_SUPERLUMINAL = 1,
  SHOCKPROF_CAUSALITY_CLASS_STRICTLY_CAUSAL = 2,
  SHOCKPROF_CAUSALITY_CLASS_SHARPLY_CAUSAL = 3,
} ShockprofCausalityClass;

typedef enum {
  SHOCKPROF_VERDICT_EXISTS = 0,
  SHOCKPROF_VERDICT_NOT_EXISTS_ATTRACTOR = 1,
  SHOCKPROF_VERDICT_NOT_EXISTS_MISSED = 2,
  SHOCKPROF_VERDICT_INCONCLUSIVE = 3,
} ShockprofVerdict;

/**
 * Opaque dissipation coefficients.
 */
typedef struct ShockprofParams ShockprofParams;

/**
 * Opaque result of a profile search.
 */
typedef struct ShockprofProfile ShockprofProfile;

/**
 * Upstream (`minus`) and downstream (`plus`) states of a normalized shock.
 */
typedef struct {
  double v_minus;
  double theta_minus;
  double v_plus;
  double theta_plus;
  double q0;
  double q1;
} ShockprofShockPair;

typedef struct {
  /**
   * Squared characteristic speeds, ascending (real parts if complex).
   */
  double sigma2_lo;
  double sigma2_hi;
  ShockprofCausalityClass classification;
  double pi_at_one;
  double discriminant;
  /**
   * The closed-form coefficient inequality, for comparison.
   */
  bool inequality_holds;
} ShockprofCausalityReport;

/**
 * Integrator settings; start from [`shockprof_controls_default`].
 */
typedef struct {
  double rel_tol;
  double abs_tol;
  double launch_offset;
  double convergence_ball;
  size_t max_steps;
  double max_arc_length;
} ShockprofControls;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *shockprof_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *shockprof_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
ShockprofStatus shockprof_params_new(double eta, double mu, double nu, ShockprofParams **out);

/**
 * # Safety
 * `params` must come from [`shockprof_params_new`] (or be null) and not be
 * used afterwards.
 */
void shockprof_params_free(ShockprofParams *params);

/**
 * Threshold `ν*`; writes `found = false` when `3μ ≤ η`.
 *
 * # Safety
 * Pointers must be valid.
 */
ShockprofStatus shockprof_nu_star(const ShockprofParams *params, double *out, bool *found);

/**
 * # Safety
 * `out` must be valid for writes.
 */
ShockprofStatus shockprof_shock_states(double q_tilde, ShockprofShockPair *out);

/**
 * Classification by the roots of the dispersion polynomial; `tol` is the
 * luminal tolerance on `max σ²`.
 *
 * # Safety
 * Pointers must be valid.
 */
ShockprofStatus shockprof_causality(const ShockprofParams *params,
                                    double tol,
                                    ShockprofCausalityReport *out);

/**
 * `det B` at speed `v` (independent of the temperature).
 *
 * # Safety
 * Pointers must be valid.
 */
ShockprofStatus shockprof_det_b(const ShockprofParams *params, double v, double *out);

/**
 * Amplitude of the saddle/attractor transition of the upstream state;
 * `found = false` when there is none.
 *
 * # Safety
 * Pointers must be valid.
 */
ShockprofStatus shockprof_critical_q(const ShockprofParams *params,
                                     double tol,
                                     double *out,
                                     bool *found);

ShockprofControls shockprof_controls_default(void);

/**
 * Runs the profile search. `controls` may be null for the defaults.
 *
 * # Safety
 * `params` must be a live handle, `controls` null or valid, `out` valid for
 * writes.
 */
ShockprofStatus shockprof_find_profile(const ShockprofParams *params,
                                       double q_tilde,
                                       const ShockprofControls *controls,
                                       ShockprofProfile **out);

/**
 * # Safety
 * `profile` must come from [`shockprof_find_profile`] (or be null) and not
 * be used afterwards.
 */
void shockprof_profile_free(ShockprofProfile *profile);

/**
 * # Safety
 * Pointers must be valid.
 */
ShockprofStatus shockprof_profile_verdict(const ShockprofProfile *profile, ShockprofVerdict *out);

/**
 * Number of samples of the connecting orbit (0 unless the verdict is
 * `Exists`).
 *
 * # Safety
 * Pointers must be valid.
 */
ShockprofStatus shockprof_profile_orbit_len(const ShockprofProfile *profile, size_t *out);

/**
 * Sample `index` of the connecting orbit: pseudo-time and `(ψ⁰, ψ¹)`.
 *
 * # Safety
 * Pointers must be valid.
 */
ShockprofStatus shockprof_profile_orbit_sample(const ShockprofProfile *profile,
                                               size_t index,
                                               double *t,
                                               double *psi0,
                                               double *psi1);

/**
 * Sweep over `count` evenly spaced amplitudes as CSV text; release with
 * [`shockprof_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
ShockprofStatus shockprof_sweep_csv(const ShockprofParams *params,
                                    double q_min,
                                    double q_max,
                                    size_t count,
                                    char **out);

/**
 * # Safety
 * `s` must come from this library (or be null) and not be used afterwards.
 */
void shockprof_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHOCKPROF_H */
