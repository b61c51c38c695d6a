/*
 * C interface to the duffing library.
 *
 * Every function returns a duffing_status; DUFFING_OK is zero. On failure the
 * calling thread's last error message is available from
 * duffing_last_error(). Trajectories are opaque handles released with
 * duffing_trajectory_free(); strings handed out by the library are released
 * with duffing_string_free().
 */
#ifndef DUFFING_DUFFING_H
#define DUFFING_DUFFING_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DUFFING_BUILDING_LIBRARY)
#    define DUFFING_API __declspec(dllexport)
#  else
#    define DUFFING_API __declspec(dllimport)
#  endif
#else
#  define DUFFING_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum duffing_status {
    DUFFING_OK = 0,
    DUFFING_ERR_INVALID_ARGUMENT = 1,
    DUFFING_ERR_STEP_FAILURE = 2,
    DUFFING_ERR_MAX_STEPS = 3,
    DUFFING_ERR_BRANCH_POINT = 4,
    DUFFING_ERR_DEGENERATE_CROSSING = 5,
    DUFFING_ERR_NO_RETURN = 6,
    DUFFING_ERR_ON_SEPARATRIX = 7,
    DUFFING_ERR_CENTER_SINGULAR = 8,
    DUFFING_ERR_ORIGIN_SINGULAR = 9,
    DUFFING_ERR_UNWRAP_AMBIGUOUS = 10,
    DUFFING_ERR_INTERNAL = 99
} duffing_status;

typedef enum duffing_sheet { DUFFING_SHEET_UPPER = 0, DUFFING_SHEET_LOWER = 1 } duffing_sheet;

typedef enum duffing_method { DUFFING_RK4_FIXED = 0, DUFFING_RK45_ADAPTIVE = 1 } duffing_method;

typedef enum duffing_event_kind { DUFFING_EVENT_CUT_CROSSING = 0, DUFFING_EVENT_SECTION_RETURN = 1 } duffing_event_kind;

typedef struct duffing_params {
    double mu;
    double c;
} duffing_params;

typedef struct duffing_integrator_config {
    duffing_method method;
    double step;
    double rel_tol;
    double abs_tol;
    double t_max;
    int64_t max_steps;
} duffing_integrator_config;

typedef struct duffing_sample {
    double t;
    double x, y;
    double x1, y1;
    duffing_sheet sheet;
} duffing_sample;

typedef struct duffing_event {
    double t;
    duffing_event_kind kind;
    double x, y;
    duffing_sheet sheet_after;
    int direction;
} duffing_event;

typedef struct duffing_energy_angle {
    double theta_unwrapped;
    double h;
} duffing_energy_angle;

typedef struct duffing_trajectory duffing_trajectory;

DUFFING_API const char* duffing_version(void);

/* Message of the most recent failure on this thread ("" if none). */
DUFFING_API const char* duffing_last_error(void);

DUFFING_API const char* duffing_status_name(duffing_status status);

/* Library defaults: adaptive 5(4), tolerances 1e-10, t_max 100, 1e7 steps. */
DUFFING_API duffing_integrator_config duffing_default_config(void);

/* Point evaluations. Output pointers must be non-null. */
DUFFING_API duffing_status duffing_field(double x, double y, const duffing_params* p, double out[2]);
DUFFING_API duffing_status duffing_hamiltonian(double x, double y, const duffing_params* p, double* out);
DUFFING_API duffing_status duffing_energy_rate(double x, double y, const duffing_params* p, double* out);
DUFFING_API duffing_status duffing_cover_map(double x, double y, double* x1, double* y1, duffing_sheet* sheet);
DUFFING_API duffing_status duffing_inverse_cover(double x1, double y1, duffing_sheet sheet, double* x, double* y);
DUFFING_API duffing_status duffing_covered_field(double x1, double y1, duffing_sheet sheet,
                                                 const duffing_params* p, double out[2]);
DUFFING_API duffing_status duffing_theta(double x, double y, double* out);
DUFFING_API duffing_status duffing_theta_dot(double x, double y, double* out);
DUFFING_API duffing_status duffing_dh_dtheta(double x, double y, const duffing_params* p, double* out);

/* Integration. On success *out owns a new trajectory. */
DUFFING_API duffing_status duffing_integrate_original(double x0, double y0, const duffing_params* p,
                                                      const duffing_integrator_config* cfg,
                                                      duffing_trajectory** out);
DUFFING_API duffing_status duffing_integrate_covered(double x1, double y1, duffing_sheet sheet,
                                                     const duffing_params* p,
                                                     const duffing_integrator_config* cfg,
                                                     duffing_trajectory** out);
DUFFING_API void duffing_trajectory_free(duffing_trajectory* traj);

DUFFING_API size_t duffing_trajectory_size(const duffing_trajectory* traj);
DUFFING_API duffing_status duffing_trajectory_sample(const duffing_trajectory* traj, size_t index,
                                                     duffing_sample* out);
DUFFING_API size_t duffing_trajectory_event_count(const duffing_trajectory* traj);
DUFFING_API duffing_status duffing_trajectory_event(const duffing_trajectory* traj, size_t index,
                                                    duffing_event* out);

/* Fills min(capacity, size) entries and writes the sample count to *count.
 * Passing out == NULL with capacity 0 only queries the count. */
DUFFING_API duffing_status duffing_trajectory_energy_angle(const duffing_trajectory* traj,
                                                           duffing_energy_angle* out, size_t capacity,
                                                           size_t* count);

DUFFING_API duffing_status duffing_find_period(double x0, double y0, const duffing_params* p,
                                               const duffing_integrator_config* cfg, double* period);
DUFFING_API duffing_status duffing_action_covered(double x0, double y0, const duffing_params* p,
                                                  const duffing_integrator_config* cfg, double* action);
DUFFING_API duffing_status duffing_action_original(double x0, double y0, const duffing_params* p,
                                                   const duffing_integrator_config* cfg, double* action);

/* Runs the default checks (or only those named `only`, when non-null and
 * non-empty). *json_lines receives one JSON object per line; *all_passed is
 * 1 iff every report passed. tolerance <= 0 keeps each check's default. */
DUFFING_API duffing_status duffing_verify(const char* only, uint64_t seed, double tolerance,
                                          char** json_lines, int* all_passed);

/* Newline-separated names of the default checks. */
DUFFING_API duffing_status duffing_check_names(char** names);

DUFFING_API void duffing_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* DUFFING_DUFFING_H */
