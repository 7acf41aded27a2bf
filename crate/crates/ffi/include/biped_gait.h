#ifndef BIPED_GAIT_H
#define BIPED_GAIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum BgStatus {
  BG_STATUS_OK = 0,
  BG_STATUS_NULL_POINTER = 1,
  BG_STATUS_INVALID_ARGUMENT = 2,
  BG_STATUS_INFEASIBLE = 3,
  BG_STATUS_NO_CONVERGENCE = 4,
  BG_STATUS_NO_STANCE = 5,
  BG_STATUS_NO_STRIKE = 6,
  BG_STATUS_CLEARANCE = 7,
  BG_STATUS_IO = 8,
  BG_STATUS_PARSE = 9,
  BG_STATUS_PANIC = 10,
} BgStatus;

/*
 Robot parameters. Opaque.
 */
typedef struct BgRobot BgRobot;

/*
 Walking surface. Opaque.
 */
typedef struct BgSurface BgSurface;

/*
 Simulated walk. Opaque.
 */
typedef struct BgWalk BgWalk;

/*
 Gait parameters, angles in radians.
 */
typedef struct BgGait {
  double alpha;
  double phi0;
  double energy;
  double gamma_f;
  double gamma_k;
  double alpha_r;
} BgGait;

/*
 Per-stride summary of a walk.
 */
typedef struct BgStrideInfo {
  double start_time;
  double nominal_t;
  double actual_t;
  double support_x;
  double support_y;
  double strike_x;
  double strike_y;
  double phi02;
  double ep;
  double clearance;
} BgStrideInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *bg_last_error(void);

/*
 Creates robot parameters; `thigh + shank` must equal `leg_length`.

 # Safety
 `out` must be valid for writes.
 */
enum BgStatus bg_robot_new(double mass,
                           double leg_length,
                           double thigh,
                           double shank,
                           double gravity,
                           struct BgRobot **out);

/*
 80 kg, 1 m legs split 0.5/0.5, g = 9.8.
 */
struct BgRobot *bg_robot_default(void);

/*
 # Safety
 `robot` must come from this library and not be used afterwards.
 */
void bg_robot_free(struct BgRobot *robot);

/*
 # Safety
 `robot` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_critical_energy(const struct BgRobot *robot, double *out);

/*
 # Safety
 `robot` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_stride_time(const struct BgRobot *robot,
                             double phi0,
                             double alpha,
                             double energy,
                             double *out);

/*
 # Safety
 `robot` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_stride_length(const struct BgRobot *robot, double alpha, double *out);

/*
 # Safety
 `robot` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_stride_speed(const struct BgRobot *robot,
                              double alpha,
                              double energy,
                              double *out);

/*
 # Safety
 `robot` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_replenishment_energy(const struct BgRobot *robot,
                                      double alpha,
                                      double energy,
                                      double *out);

/*
 Incomplete elliptic integral of the first kind, `F(x | m)`.

 # Safety
 `out` must be valid for writes.
 */
enum BgStatus bg_ellip_f(double x, double m, double *out);

/*
 Speed-optimal opening angle. `interior` is false when the optimum lies
 on the edge of the search interval. Pass `tol <= 0` for the default.

 # Safety
 `robot` must be a live handle; the out-pointers valid for writes.
 */
enum BgStatus bg_optimal_beta(const struct BgRobot *robot,
                              double energy,
                              double tol,
                              double *beta,
                              double *speed,
                              bool *interior);

/*
 Flat-ground minimum foot clearance during the second foot phase.

 # Safety
 `robot` must be a live handle, `gait` readable, `out` valid for writes.
 */
enum BgStatus bg_min_clearance(const struct BgRobot *robot, const struct BgGait *gait, double *out);

/*
 Builds a surface from a JSON descriptor such as
 `{"type":"sin","d":0.06,"omega":4}`.

 # Safety
 `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum BgStatus bg_surface_from_json(const char *json, struct BgSurface **out);

/*
 # Safety
 `surface` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_surface_height(const struct BgSurface *surface, double x, double *out);

/*
 # Safety
 `surface` must come from this library and not be used afterwards.
 */
void bg_surface_free(struct BgSurface *surface);

/*
 Walks `strides` strides from `start_x`. A null `surface` means flat
 ground; `samples` is the number of poses recorded per stride.

 # Safety
 `robot` must be a live handle, `gait` readable, `surface` null or live,
 `out` valid for writes.
 */
enum BgStatus bg_walk_new(const struct BgRobot *robot,
                          const struct BgGait *gait,
                          const struct BgSurface *surface,
                          double start_x,
                          uintptr_t strides,
                          uintptr_t samples,
                          bool strict,
                          struct BgWalk **out);

/*
 Time-reversed copy of a walk.

 # Safety
 `walk` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_walk_reverse(const struct BgWalk *walk, struct BgWalk **out);

/*
 Number of strides, or 0 for a null handle.

 # Safety
 `walk` must be null or a live handle.
 */
uintptr_t bg_walk_stride_count(const struct BgWalk *walk);

/*
 # Safety
 `walk` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_walk_total_cost(const struct BgWalk *walk, double *out);

/*
 # Safety
 `walk` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_walk_stride(const struct BgWalk *walk, uintptr_t index, struct BgStrideInfo *out);

/*
 Writes the pose trace as CSV.

 # Safety
 `walk` must be a live handle and `path` a NUL-terminated string.
 */
enum BgStatus bg_walk_write_csv(const struct BgWalk *walk, const char *path);

/*
 The full trace as JSON. Release the string with [`bg_string_free`].

 # Safety
 `walk` must be a live handle and `out` valid for writes.
 */
enum BgStatus bg_walk_to_json(const struct BgWalk *walk, char **out);

/*
 # Safety
 `walk` must come from this library and not be used afterwards.
 */
void bg_walk_free(struct BgWalk *walk);

/*
 # Safety
 `s` must come from this library and not be used afterwards.
 */
void bg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIPED_GAIT_H */
