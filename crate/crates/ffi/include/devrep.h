#ifndef DEVREP_H
#define DEVREP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DevrepStatus {
  DEVREP_STATUS_OK = 0,
  DEVREP_STATUS_NULL_POINTER = 1,
  DEVREP_STATUS_OUT_OF_RANGE = 2,
  DEVREP_STATUS_NON_FINITE = 3,
  DEVREP_STATUS_DEGENERATE_STATE = 4,
  DEVREP_STATUS_INVALID_ARGUMENT = 5,
  /**
   * The requested value does not exist for these inputs.
   */
  DEVREP_STATUS_ABSENT = 6,
  DEVREP_STATUS_INDEX_OUT_OF_BOUNDS = 7,
  DEVREP_STATUS_PANIC = 8,
} DevrepStatus;

typedef enum DevrepRegime {
  DEVREP_REGIME_SUBCRITICAL = 0,
  DEVREP_REGIME_BISTABLE = 1,
  DEVREP_REGIME_FALSE_ONLY = 2,
} DevrepRegime;

typedef enum DevrepEvent {
  DEVREP_EVENT_POSITIVE = 0,
  DEVREP_EVENT_NEGATIVE = 1,
  DEVREP_EVENT_INDIRECT = 2,
} DevrepEvent;

typedef enum DevrepRegion {
  DEVREP_REGION_ABOVE = 0,
  DEVREP_REGION_BELOW = 1,
} DevrepRegion;

/**
 * Model parameters.
 */
typedef struct DevrepParams DevrepParams;

/**
 * A piecewise mean-field solution.
 */
typedef struct DevrepSolution DevrepSolution;

/**
 * A simulated path.
 */
typedef struct DevrepTrajectory DevrepTrajectory;

typedef struct DevrepParamValues {
  double theta;
  double p;
  double pbar;
  double d;
  double omega;
  double u;
} DevrepParamValues;

/**
 * Regime classification. Absent values are NaN with the `has_*` flag cleared.
 */
typedef struct DevrepRegimeSummary {
  enum DevrepRegime regime;
  bool has_pbar_critical;
  double pbar_critical;
  double d_c1;
  double d_c2;
  double false_reputation;
  uint32_t n_fixed_points;
  bool has_true_point;
  double true_alpha;
  double true_beta;
  bool has_false_point;
  double false_alpha;
  double false_beta;
  bool two_sided_unique;
} DevrepRegimeSummary;

/**
 * One simulation step; counters are after the event, `t` is NaN without timestamps.
 */
typedef struct DevrepStep {
  uint64_t step;
  double t;
  double alpha;
  double beta;
  enum DevrepEvent event;
  bool accepted;
} DevrepStep;

/**
 * One ODE segment; `t_end` is NaN for a segment that never leaves its region.
 */
typedef struct DevrepSegment {
  enum DevrepRegion region;
  double t_start;
  double t_end;
  double alpha_start;
  double beta_start;
  double asymptote_alpha;
  double asymptote_beta;
} DevrepSegment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *devrep_version(void);

/**
 * Message of the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *devrep_last_error_message(void);

enum DevrepStatus devrep_params_new(double theta,
                                    double p,
                                    double d,
                                    double omega,
                                    double u,
                                    struct DevrepParams **out);

void devrep_params_free(struct DevrepParams *params);

enum DevrepStatus devrep_params_get(const struct DevrepParams *params,
                                    struct DevrepParamValues *out);

/**
 * Critical lying probability; `DEVREP_STATUS_ABSENT` when `theta <= d`.
 */
enum DevrepStatus devrep_critical_pbar(double theta, double d, double omega, double *out);

/**
 * Reputation value of the false fixed point, `p theta / (p + omega pbar)`.
 */
enum DevrepStatus devrep_false_reputation(const struct DevrepParams *params, double *out);

enum DevrepStatus devrep_classify_regime(const struct DevrepParams *params,
                                         struct DevrepRegimeSummary *out);

/**
 * Simulates `n_steps` events of the process indexed by `scaling_n` (1 for
 * the plain process).
 */
enum DevrepStatus devrep_simulate(const struct DevrepParams *params,
                                  double r0,
                                  size_t n_steps,
                                  uint64_t seed,
                                  uint64_t scaling_n,
                                  bool timestamps,
                                  struct DevrepTrajectory **out);

void devrep_trajectory_free(struct DevrepTrajectory *traj);

/**
 * Number of steps; 0 for a null handle.
 */
size_t devrep_trajectory_len(const struct DevrepTrajectory *traj);

/**
 * Initial counters.
 */
enum DevrepStatus devrep_trajectory_initial(const struct DevrepTrajectory *traj,
                                            double *alpha,
                                            double *beta);

enum DevrepStatus devrep_trajectory_step(const struct DevrepTrajectory *traj,
                                         size_t index,
                                         struct DevrepStep *out);

/**
 * Copies up to `capacity` post-step reputations into `buf` and stores the
 * number copied in `written`.
 */
enum DevrepStatus devrep_trajectory_reputations(const struct DevrepTrajectory *traj,
                                                double *buf,
                                                size_t capacity,
                                                size_t *written);

/**
 * Solves the mean-field ODE from `(alpha0, beta0)` on `[0, horizon]`.
 */
enum DevrepStatus devrep_ode_solve(const struct DevrepParams *params,
                                   double alpha0,
                                   double beta0,
                                   double horizon,
                                   struct DevrepSolution **out);

void devrep_solution_free(struct DevrepSolution *sol);

/**
 * Number of segments; 0 for a null handle.
 */
size_t devrep_solution_segment_count(const struct DevrepSolution *sol);

enum DevrepStatus devrep_solution_segment(const struct DevrepSolution *sol,
                                          size_t index,
                                          struct DevrepSegment *out);

/**
 * State at `t`; `DEVREP_STATUS_OUT_OF_RANGE` outside `[0, horizon]`.
 */
enum DevrepStatus devrep_solution_state_at(const struct DevrepSolution *sol,
                                           double t,
                                           double *alpha,
                                           double *beta);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEVREP_H */
