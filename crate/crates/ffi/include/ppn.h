/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PPN_H
#define PPN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PpnStatus {
  PPN_STATUS_OK = 0,
  PPN_STATUS_NULL_POINTER = 1,
  PPN_STATUS_INVALID_ARGUMENT = 2,
  PPN_STATUS_DEGENERATE_GEOMETRY = 3,
  PPN_STATUS_OUT_OF_RANGE = 4,
  PPN_STATUS_DIVERGENT = 5,
  PPN_STATUS_NUMERIC_FAILURE = 6,
  PPN_STATUS_NOT_INTERCEPTED = 7,
  PPN_STATUS_INDEX_OUT_OF_BOUNDS = 8,
  PPN_STATUS_PANIC = 9,
} PpnStatus;

typedef enum PpnDomain {
  PPN_DOMAIN_TIME = 0,
  PPN_DOMAIN_ARC_LENGTH = 1,
} PpnDomain;

typedef enum PpnTermination {
  PPN_TERMINATION_INTERCEPT = 0,
  PPN_TERMINATION_MISSED = 1,
  PPN_TERMINATION_HORIZON = 2,
  PPN_TERMINATION_DIVERGED = 3,
  PPN_TERMINATION_SPEED_EXHAUSTED = 4,
} PpnTermination;

// Opaque simulation result.
typedef struct PpnTrajectory PpnTrajectory;

// Engagement and integrator settings. Angles in radians.
typedef struct PpnSimConfig {
  double missile_x;
  double missile_y;
  double target_x;
  double target_y;
  double theta_m0;
  double v0;
  double drag;
  double nav_gain;
  double kill_radius;
  double time_step;
  double arc_step;
  uint64_t max_steps;
  uint64_t log_every;
  enum PpnDomain domain;
  // Lateral acceleration limit in m/s^2; zero or negative disables it.
  double alpha;
} PpnSimConfig;

typedef struct PpnSample {
  double t;
  double s_m;
  double x;
  double y;
  double v_m;
  double phi_m;
  double r;
  double q;
  double theta_m;
  double q_dot;
  double q_prime;
  double k_m;
  double a_m;
} PpnSample;

typedef struct PpnSummary {
  double miss_distance;
  double flight_time;
  double flight_path;
  double curvature_increment;
  double max_r;
  double max_k;
  double terminal_q;
  double terminal_phi;
  enum PpnTermination terminated;
  bool saturated;
} PpnSummary;

typedef struct PpnClosedForm {
  double max_distance;
  // For gains at or below 2, the curvature at `cutoff_r`.
  double max_curvature;
  bool curvature_unbounded;
  double curvature_increment;
  double flight_path;
  double terminal_angle;
} PpnClosedForm;

typedef struct PpnCaptureRegion {
  double capture_ratio;
  bool full;
  // `|theta_m0|` up to this angle is captured; NaN when `full`.
  double forward_boundary;
  // `|theta_m0|` from this angle up to pi is captured; NaN when `full`.
  double rear_boundary;
  // Smallest initial range with a full region.
  double full_capture_min_range;
} PpnCaptureRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Most recent error message on this thread, or null if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *ppn_last_error_message(void);

// Fills `out` with the reference engagement for a leading angle and gain.
//
// # Safety
// `out` must be null or point to writable memory for a `PpnSimConfig`.
enum PpnStatus ppn_sim_config_reference(double theta_m0, double nav_gain, struct PpnSimConfig *out);

// Runs one engagement and stores a new handle in `*out`.
//
// A run that ends without intercept still succeeds; check `terminated` in
// the summary.
//
// # Safety
// `config` must be null or point to a valid `PpnSimConfig`; `out` must be
// null or point to writable storage for a pointer. On success the caller
// owns `*out` and must release it with `ppn_trajectory_free`.
enum PpnStatus ppn_simulate(const struct PpnSimConfig *config, struct PpnTrajectory **out);

// Number of logged samples; zero for a null handle.
//
// # Safety
// `traj` must be null or a live handle from `ppn_simulate`.
size_t ppn_trajectory_len(const struct PpnTrajectory *traj);

// Copies sample `index` into `out`.
//
// # Safety
// `traj` must be null or a live handle; `out` must be null or writable.
enum PpnStatus ppn_trajectory_sample(const struct PpnTrajectory *traj,
                                     size_t index,
                                     struct PpnSample *out);

// Copies the run summary into `out`.
//
// # Safety
// `traj` must be null or a live handle; `out` must be null or writable.
enum PpnStatus ppn_trajectory_summary(const struct PpnTrajectory *traj, struct PpnSummary *out);

// Releases a handle. Null is ignored.
//
// # Safety
// `traj` must be null or a handle from `ppn_simulate` not yet freed.
void ppn_trajectory_free(struct PpnTrajectory *traj);

// Closed-form engagement metrics. Angles in radians.
//
// # Safety
// `out` must be null or point to writable memory for a `PpnClosedForm`.
enum PpnStatus ppn_closed_form(double r0,
                               double theta_m0,
                               double q0,
                               double nav_gain,
                               double cutoff_r,
                               struct PpnClosedForm *out);

// Analytic capture region under a lateral acceleration limit `alpha`
// (m/s^2) at speed `v_max`. Requires `nav_gain > 2`.
//
// # Safety
// `out` must be null or point to writable memory for a `PpnCaptureRegion`.
enum PpnStatus ppn_capture_region(double r0,
                                  double alpha,
                                  double v_max,
                                  double nav_gain,
                                  struct PpnCaptureRegion *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPN_H */
