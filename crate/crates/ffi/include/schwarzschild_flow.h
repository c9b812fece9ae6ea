#ifndef SCHWARZSCHILD_FLOW_H
#define SCHWARZSCHILD_FLOW_H

/* Generated by cbindgen from the Rust sources; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum SfStatus {
  SF_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  SF_ERR_NULL_POINTER = 1,
  /**
   * A parameter, coordinate or configuration value is out of range.
   */
  SF_ERR_INVALID_ARGUMENT = 2,
  /**
   * Input data is unusable (non-finite, wrong length).
   */
  SF_ERR_DATA = 3,
  /**
   * An iterative solver did not converge.
   */
  SF_ERR_NO_CONVERGENCE = 4,
  /**
   * A matrix factorization broke down.
   */
  SF_ERR_FACTORIZATION = 5,
  /**
   * The flow or the de Turck transport failed.
   */
  SF_ERR_FLOW = 6,
  /**
   * Any other numerical failure.
   */
  SF_ERR_NUMERICAL = 7,
  /**
   * A caller buffer is too small; the message names the required length.
   */
  SF_ERR_BUFFER_TOO_SMALL = 8,
  /**
   * The requested quantity does not exist for this result.
   */
  SF_ERR_NOT_AVAILABLE = 9,
  /**
   * Internal panic caught at the boundary.
   */
  SF_ERR_PANIC = 10,
} SfStatus;

/**
 * Opaque lowest eigenpair.
 */
typedef struct SfEigen SfEigen;

/**
 * Opaque settings table (the same keys as the command-line config file).
 */
typedef struct SfSettings SfSettings;

/**
 * Opaque flow trajectory.
 */
typedef struct SfTrajectory SfTrajectory;

/**
 * Closed-form curvature of Euclidean Schwarzschild at one radius.
 */
typedef struct SfCurvature {
  /**
   * Γ^k_ij at index (k * 4 + i) * 4 + j.
   */
  double christoffel[64];
  /**
   * R_ijij at index i * 4 + j.
   */
  double riemann_diag[16];
  /**
   * Sectional curvature K_ij at index i * 4 + j.
   */
  double sectional[16];
  /**
   * Ricci tensor at index i * 4 + j.
   */
  double ricci[16];
} SfCurvature;

/**
 * Energy bracket of the explicit test tensor.
 */
typedef struct SfLemma36 {
  uint32_t n;
  /**
   * J1..J8.
   */
  double j[8];
  double total;
  double a_hat;
  /**
   * J1 + J6, J2 + J4 + J7, J3 + J5 + J8.
   */
  double groupings[3];
  /**
   * Whether each grouping is below its bound.
   */
  bool groupings_hold[3];
  bool total_holds;
  /**
   * Bracket with the r² volume factor kept in the gradient term.
   */
  double corrected_total;
  double norm_sq;
} SfLemma36;

/**
 * One recorded state.
 */
typedef struct SfTrajectoryRow {
  double t;
  double delta;
  double norm_g_minus_g0;
  double norm_w;
  double cone_opening;
  double farfield_max;
} SfTrajectoryRow;

/**
 * Least-squares growth rate over the first e-folding.
 */
typedef struct SfGrowthFit {
  double slope;
  double ci_low;
  double ci_high;
  double standard_error;
  size_t points;
} SfGrowthFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sf_version(void);

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be NULL or point to `len` writable bytes.
 */
size_t sf_last_error_message(char *buf, size_t len);

/**
 * Curvature at radius `r > 1`.
 *
 * # Safety
 * `out` must point to a writable `SfCurvature`.
 */
enum SfStatus sf_curvature(double r, struct SfCurvature *out);

/**
 * Largest |Ric_ij| and largest |K_ij| r³ over `count` radii.
 *
 * # Safety
 * `radii` must point to `count` readable doubles; the outputs must be writable.
 */
enum SfStatus sf_curvature_bounds(const double *radii,
                                  size_t count,
                                  double *max_ricci_out,
                                  double *max_sectional_ratio_out);

/**
 * Evaluate the certificate for ramp parameter `n ≥ 1`.
 *
 * # Safety
 * `out` must point to a writable `SfLemma36`.
 */
enum SfStatus sf_lemma36(uint32_t n, struct SfLemma36 *out);

/**
 * New settings holding the defaults.
 *
 * # Safety
 * `out` must point to a writable handle slot.
 */
enum SfStatus sf_settings_new(struct SfSettings **out);

/**
 * Set one `key` to the textual `value`.
 *
 * # Safety
 * `settings` must be a live handle; `key` and `value` NUL-terminated strings.
 */
enum SfStatus sf_settings_set(struct SfSettings *settings, const char *key, const char *value);

/**
 * Apply the contents of a `key = value` config text.
 *
 * # Safety
 * `settings` must be a live handle; `text` a NUL-terminated string.
 */
enum SfStatus sf_settings_apply_config(struct SfSettings *settings, const char *text);

/**
 * Release a settings handle.
 *
 * # Safety
 * `settings` must be NULL or a handle not yet freed.
 */
void sf_settings_free(struct SfSettings *settings);

/**
 * Solve for the lowest eigenpair with the eigen settings of `settings`.
 *
 * # Safety
 * `settings` must be a live handle; `out` a writable handle slot.
 */
enum SfStatus sf_eigen_solve(const struct SfSettings *settings, struct SfEigen **out);

/**
 * Eigenvalue, residual ‖Δ_L h + λh‖₂ and number of stored nodes.
 *
 * # Safety
 * `eigen` must be a live handle; non-NULL outputs must be writable.
 */
enum SfStatus sf_eigen_summary(const struct SfEigen *eigen,
                               double *lambda_out,
                               double *residual_out,
                               size_t *nodes_out);

/**
 * Copy the mode profile (nodes p and frame components u0, u1, u2) into
 * four arrays of length `len`, which must equal the node count.
 *
 * # Safety
 * `eigen` must be a live handle; each output must hold `len` doubles.
 */
enum SfStatus sf_eigen_mode(const struct SfEigen *eigen,
                            double *p,
                            double *u0,
                            double *u1,
                            double *u2,
                            size_t len);

/**
 * Release an eigen handle.
 *
 * # Safety
 * `eigen` must be NULL or a handle not yet freed.
 */
void sf_eigen_free(struct SfEigen *eigen);

/**
 * Run the flow configured by `settings`, seeded by the mode of `eigen`.
 *
 * # Safety
 * `settings` and `eigen` must be live handles; `out` a writable handle slot.
 */
enum SfStatus sf_flow_run(const struct SfSettings *settings,
                          const struct SfEigen *eigen,
                          struct SfTrajectory **out);

/**
 * Number of recorded states and whether the run blew up.
 *
 * # Safety
 * `traj` must be a live handle; non-NULL outputs must be writable.
 */
enum SfStatus sf_trajectory_info(const struct SfTrajectory *traj,
                                 size_t *rows_out,
                                 bool *blew_up_out);

/**
 * Copy the recorded states into `rows` (capacity `len`).
 *
 * # Safety
 * `traj` must be a live handle; `rows` must hold `len` entries.
 */
enum SfStatus sf_trajectory_rows(const struct SfTrajectory *traj,
                                 struct SfTrajectoryRow *rows,
                                 size_t len);

/**
 * Growth-rate fit; `SF_ERR_NOT_AVAILABLE` when the run has too few
 * states in the window or a vanishing perturbation.
 *
 * # Safety
 * `traj` must be a live handle; `out` writable.
 */
enum SfStatus sf_trajectory_growth(const struct SfTrajectory *traj, struct SfGrowthFit *out);

/**
 * Release a trajectory handle.
 *
 * # Safety
 * `traj` must be NULL or a handle not yet freed.
 */
void sf_trajectory_free(struct SfTrajectory *traj);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHWARZSCHILD_FLOW_H */
