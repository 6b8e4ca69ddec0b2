/*
 * hbft: simulation and certification of the heavy ball with time-dependent
 * friction,  x'' + lambda(t) x' + grad Phi(x) = 0,  and of the bead-on-surface
 * model it reduces.
 *
 * C interface. Objects are opaque handles created by *_create / *_load /
 * *_run functions and released by the matching *_destroy. Every fallible
 * function returns an hbft_status; on failure hbft_last_error() holds a
 * message for the calling thread. Handles are immutable once created and may
 * be shared between threads for reading.
 */
#ifndef HBFT_HBFT_H
#define HBFT_HBFT_H

#include <stddef.h>

#if defined(HBFT_BUILDING_LIBRARY)
#define HBFT_API __attribute__((visibility("default")))
#else
#define HBFT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hbft_status {
  HBFT_OK = 0,
  HBFT_ERR_INPUT = 1,       /* bad argument: dimension mismatch, t < 0, ... */
  HBFT_ERR_CAPABILITY = 2,  /* e.g. Hessian form or lambda derivative absent */
  HBFT_ERR_DIVERGENCE = 3,  /* non-finite state */
  HBFT_ERR_CONSISTENCY = 4, /* object broke its declared contract */
  HBFT_ERR_CONFIG = 5,      /* scenario or grid file rejected */
  HBFT_ERR_INTEGRATION = 6, /* step size underflow */
  HBFT_ERR_IO = 7,
  HBFT_ERR_INTERNAL = 8
} hbft_status;

HBFT_API const char* hbft_version(void);

/* Message for the last failed call on this thread; empty after success. */
HBFT_API const char* hbft_last_error(void);

/* ---- parameters ---------------------------------------------------------- */

typedef struct hbft_params hbft_params;

HBFT_API hbft_status hbft_params_create(hbft_params** out);
HBFT_API void hbft_params_destroy(hbft_params* params);
HBFT_API hbft_status hbft_params_set(hbft_params* params, const char* key,
                                     const double* values, size_t count);

/* ---- builtin catalogues -------------------------------------------------- */

HBFT_API size_t hbft_potential_catalogue_size(void);
HBFT_API hbft_status hbft_potential_catalogue_entry(size_t index, const char** name,
                                                    const char** description);
HBFT_API size_t hbft_schedule_catalogue_size(void);
HBFT_API hbft_status hbft_schedule_catalogue_entry(size_t index, const char** name,
                                                   const char** description);

/* ---- potentials ---------------------------------------------------------- */

typedef struct hbft_potential hbft_potential;

/* params may be NULL for defaults. */
HBFT_API hbft_status hbft_potential_create(const char* name, const hbft_params* params,
                                           hbft_potential** out);
HBFT_API void hbft_potential_destroy(hbft_potential* p);
HBFT_API size_t hbft_potential_dim(const hbft_potential* p);
HBFT_API int hbft_potential_has_hessian(const hbft_potential* p);
HBFT_API int hbft_potential_unbounded_below(const hbft_potential* p);
HBFT_API hbft_status hbft_potential_lower_bound(const hbft_potential* p, int* known,
                                                double* value);
HBFT_API hbft_status hbft_potential_value(const hbft_potential* p, const double* x, size_t n,
                                          double* out);
HBFT_API hbft_status hbft_potential_gradient(const hbft_potential* p, const double* x, size_t n,
                                             double* grad_out);
HBFT_API hbft_status hbft_potential_hessian_quadform(const hbft_potential* p, const double* x,
                                                     const double* v, size_t n, double* out);
/* max_i |central difference_i - gradient_i| with step h */
HBFT_API hbft_status hbft_potential_validate_gradient(const hbft_potential* p, const double* x,
                                                      size_t n, double h, double* residual);

/* ---- friction schedules -------------------------------------------------- */

typedef struct hbft_schedule hbft_schedule;

HBFT_API hbft_status hbft_schedule_create(const char* name, const hbft_params* params,
                                          hbft_schedule** out);
HBFT_API void hbft_schedule_destroy(hbft_schedule* s);
HBFT_API int hbft_schedule_has_derivative(const hbft_schedule* s);
HBFT_API hbft_status hbft_schedule_lambda(const hbft_schedule* s, double t, double* out);
HBFT_API hbft_status hbft_schedule_lambda_dot(const hbft_schedule* s, double t, double* out);

typedef struct hbft_friction_report {
  double grid_spacing;
  double max_increment;
  double continuity_threshold;
  int continuity_ok;
  int bounded;
  double max_after_t1;
  double min_lambda;
  int nonnegative;
  int strictly_positive;
  int has_derivative;
  int derivative_bounded;
  double max_abs_derivative;
} hbft_friction_report;

HBFT_API hbft_status hbft_schedule_verify(const hbft_schedule* s, double horizon,
                                          size_t grid_points, double bound_guess,
                                          double t1_guess, hbft_friction_report* out);

/* ---- dynamics ------------------------------------------------------------ */

typedef struct hbft_mechanical {
  double mass;
  double gravity;
} hbft_mechanical;

HBFT_API hbft_status hbft_hbft_field(const hbft_potential* p, const hbft_schedule* s, double t,
                                     const double* x, const double* v, size_t n, double* dx,
                                     double* dv);
HBFT_API hbft_status hbft_full_surface_field(const hbft_potential* p, const hbft_schedule* s,
                                             const hbft_mechanical* mech, double t,
                                             const double* x, const double* v, size_t n,
                                             double* dx, double* dv);
HBFT_API hbft_status hbft_reaction_force(const hbft_potential* p, const hbft_mechanical* mech,
                                         const double* x, const double* v, size_t n,
                                         double* magnitude, int* contact_lost);
HBFT_API hbft_status hbft_energy(const hbft_potential* p, const double* x, const double* v,
                                 size_t n, double* out);
HBFT_API hbft_status hbft_dissipation_rate(const hbft_schedule* s, double t, const double* v,
                                           size_t n, double* out);

/* ---- integration --------------------------------------------------------- */

typedef enum hbft_model { HBFT_MODEL_HBFT = 0, HBFT_MODEL_FULL_SURFACE = 1 } hbft_model;
typedef enum hbft_method { HBFT_METHOD_RK4 = 0, HBFT_METHOD_DOPRI45 = 1 } hbft_method;
typedef enum hbft_termination {
  HBFT_TERM_T_MAX = 0,
  HBFT_TERM_STATIONARY = 1,
  HBFT_TERM_DIVERGED = 2,
  HBFT_TERM_CONTACT_LOST = 3
} hbft_termination;

typedef struct hbft_integrator_config {
  hbft_method method;
  double step; /* rk4 */
  double abs_tol;
  double rel_tol;
  double h_min;
  double h_max;
  double t_max;
  size_t sample_stride;
  double sample_dt; /* <= 0: use sample_stride */
  double stationarity_tol;
  double dwell;
  double divergence_radius;
  int halt_on_contact_loss;
} hbft_integrator_config;

HBFT_API void hbft_integrator_config_default(hbft_integrator_config* cfg);

typedef struct hbft_trajectory hbft_trajectory;

/* mech may be NULL for HBFT_MODEL_HBFT. On step underflow the call returns
 * HBFT_ERR_INTEGRATION and still stores the partial trajectory in *out. */
HBFT_API hbft_status hbft_integrate(hbft_model model, const hbft_potential* p,
                                    const hbft_schedule* s, const hbft_mechanical* mech,
                                    const double* x0, const double* v0, size_t n,
                                    const hbft_integrator_config* cfg, hbft_trajectory** out);

/* One classical Runge-Kutta step of the chosen model from (t, x, v). */
HBFT_API hbft_status hbft_step_rk4(hbft_model model, const hbft_potential* p,
                                   const hbft_schedule* s, const hbft_mechanical* mech, double t,
                                   const double* x, const double* v, size_t n, double h,
                                   double* x_out, double* v_out);

HBFT_API void hbft_trajectory_destroy(hbft_trajectory* traj);
HBFT_API size_t hbft_trajectory_size(const hbft_trajectory* traj);
HBFT_API size_t hbft_trajectory_dim(const hbft_trajectory* traj);
HBFT_API hbft_termination hbft_trajectory_termination(const hbft_trajectory* traj);

typedef struct hbft_sample_info {
  double t;
  double energy;
  double lambda;
  double grad_norm;
  double dissipation;
} hbft_sample_info;

/* x_out and v_out may be NULL; otherwise they receive dim values each. */
HBFT_API hbft_status hbft_trajectory_sample(const hbft_trajectory* traj, size_t index,
                                            hbft_sample_info* info, double* x_out,
                                            double* v_out);
HBFT_API hbft_status hbft_trajectory_step_stats(const hbft_trajectory* traj, size_t* accepted,
                                                size_t* rejected, double* min_step,
                                                double* max_step);
HBFT_API hbft_status hbft_trajectory_write_csv(const hbft_trajectory* traj, const char* path);

/* ---- diagnostics --------------------------------------------------------- */

typedef struct hbft_check_result {
  int pass; /* residual <= threshold */
  double residual;
  double threshold;
  int partial_certificate; /* checked on [0, t_final] only */
} hbft_check_result;

HBFT_API hbft_status hbft_check_energy_monotone(const hbft_trajectory* traj, double tol,
                                                hbft_check_result* out);
HBFT_API hbft_status hbft_check_energy_balance(const hbft_trajectory* traj,
                                               const hbft_schedule* s, double threshold,
                                               hbft_check_result* out);
HBFT_API hbft_status hbft_check_velocity_bound(const hbft_trajectory* traj,
                                               const hbft_potential* p, double tol,
                                               hbft_check_result* out);
HBFT_API hbft_status hbft_check_acceleration_bound(const hbft_trajectory* traj,
                                                   const hbft_potential* p,
                                                   const hbft_schedule* s, double bound,
                                                   hbft_check_result* out);
HBFT_API hbft_status hbft_check_model_discrepancy(const hbft_trajectory* full,
                                                  const hbft_trajectory* reduced,
                                                  double threshold, hbft_check_result* out);

typedef struct hbft_tail_report {
  double tail_sup_sqrt_lambda_v;
  double tail_sup_grad;
  double sup_v;
  double sup_x;
  double dissipation_integral;
  int premise_unverified;
} hbft_tail_report;

HBFT_API hbft_status hbft_tail_asymptotics(const hbft_trajectory* traj, const hbft_schedule* s,
                                           const hbft_potential* p, double tail_fraction,
                                           hbft_tail_report* out);

typedef enum hbft_premise {
  HBFT_PREMISE_HOLDS = 0,
  HBFT_PREMISE_VIOLATED = 1,
  HBFT_PREMISE_NOT_ESTABLISHED = 2
} hbft_premise;

typedef struct hbft_barbalat_budgets {
  double l2;
  double linf;
  double derivative;
  double tail_threshold;
  double tail_fraction;
} hbft_barbalat_budgets;

typedef struct hbft_barbalat_report {
  hbft_premise l2;
  hbft_premise linf;
  hbft_premise derivative;
  int conclusion;
  double l2_integral;
  double sup_abs;
  double sup_abs_derivative;
  double tail_sup_abs;
} hbft_barbalat_report;

/* df may be NULL: the derivative is then taken by finite differences. */
HBFT_API hbft_status hbft_barbalat_check(const double* t, const double* f, const double* df,
                                         size_t count, const hbft_barbalat_budgets* budgets,
                                         hbft_barbalat_report* out);

/* ---- scenarios ----------------------------------------------------------- */

typedef struct hbft_scenario hbft_scenario;
typedef struct hbft_run hbft_run;

HBFT_API hbft_status hbft_scenario_load(const char* path, hbft_scenario** out);
HBFT_API hbft_status hbft_scenario_parse(const char* yaml_text, hbft_scenario** out);
HBFT_API void hbft_scenario_destroy(hbft_scenario* sc);
HBFT_API const char* hbft_scenario_name(const hbft_scenario* sc);
/* Builds every component; HBFT_ERR_CONFIG with a line-anchored message. */
HBFT_API hbft_status hbft_scenario_validate(const hbft_scenario* sc);

/* Integrates, certifies and writes <name>.csv, <name>.report.json and
 * <name>.summary.txt under out_dir. Returns HBFT_OK whenever the run
 * produced artifacts; the verdict is hbft_run_exit_code (0 pass, 1 check
 * failure, 3 integration hard error). */
HBFT_API hbft_status hbft_scenario_run(const hbft_scenario* sc, const char* out_dir,
                                       hbft_run** out);
HBFT_API void hbft_run_destroy(hbft_run* run);
HBFT_API int hbft_run_exit_code(const hbft_run* run);
HBFT_API const char* hbft_run_summary(const hbft_run* run);
HBFT_API const char* hbft_run_csv_path(const hbft_run* run);
HBFT_API const char* hbft_run_report_path(const hbft_run* run);
/* Borrowed; valid while run lives. */
HBFT_API const hbft_trajectory* hbft_run_trajectory(const hbft_run* run);
HBFT_API size_t hbft_run_check_count(const hbft_run* run);
HBFT_API hbft_status hbft_run_check(const hbft_run* run, size_t index, const char** name,
                                    hbft_check_result* out);

/* ---- sweeps -------------------------------------------------------------- */

typedef struct hbft_sweep hbft_sweep;

typedef struct hbft_sweep_row {
  int ok;
  int exit_code;
  hbft_termination termination;
  double t_final;
  double final_energy;
  double tail_sqrt_lambda_v;
  int checks_pass;
} hbft_sweep_row;

/* workers == 0 uses the hardware thread count. */
HBFT_API hbft_status hbft_sweep_run(const hbft_scenario* base, const char* grid_path,
                                    const char* out_dir, unsigned workers, hbft_sweep** out);
HBFT_API void hbft_sweep_destroy(hbft_sweep* sweep);
HBFT_API int hbft_sweep_exit_code(const hbft_sweep* sweep);
HBFT_API size_t hbft_sweep_size(const hbft_sweep* sweep);
HBFT_API hbft_status hbft_sweep_get_row(const hbft_sweep* sweep, size_t index,
                                        hbft_sweep_row* out);
HBFT_API const char* hbft_sweep_table(const hbft_sweep* sweep);
HBFT_API const char* hbft_sweep_table_path(const hbft_sweep* sweep);

#ifdef __cplusplus
}
#endif

#endif /* HBFT_HBFT_H */
