#include "hbft/hbft.h"

#include <algorithm>
#include <memory>
#include <string>

#include "core/diagnostics.hpp"
#include "core/output.hpp"
#include "core/scenario.hpp"
#include "core/sweep.hpp"

struct hbft_params {
  hbft::ParamMap map;
};

struct hbft_potential {
  hbft::Potential value;
};

struct hbft_schedule {
  hbft::FrictionSchedule value;
};

struct hbft_trajectory {
  hbft::Trajectory value;
};

struct hbft_scenario {
  hbft::ScenarioConfig config;
};

struct hbft_run {
  hbft::ScenarioOutcome outcome;
  hbft_trajectory trajectory;
  std::string csv_path;
  std::string report_path;
};

struct hbft_sweep {
  hbft::SweepOutcome outcome;
  std::string table;
  std::string table_path;
};

namespace {

thread_local std::string g_last_error;

hbft_status status_of(hbft::ErrorKind kind) {
  switch (kind) {
    case hbft::ErrorKind::input: return HBFT_ERR_INPUT;
    case hbft::ErrorKind::capability: return HBFT_ERR_CAPABILITY;
    case hbft::ErrorKind::divergence: return HBFT_ERR_DIVERGENCE;
    case hbft::ErrorKind::consistency: return HBFT_ERR_CONSISTENCY;
    case hbft::ErrorKind::config: return HBFT_ERR_CONFIG;
    case hbft::ErrorKind::integration: return HBFT_ERR_INTEGRATION;
    case hbft::ErrorKind::io: return HBFT_ERR_IO;
  }
  return HBFT_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes and the
// thread-local message.
template <typename F>
hbft_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return HBFT_OK;
  } catch (const hbft::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return HBFT_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HBFT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return HBFT_ERR_INTERNAL;
  }
}

template <typename T>
void require(const T* ptr, const char* what) {
  if (ptr == nullptr) throw hbft::InputError(std::string(what) + " must not be NULL");
}

hbft::Vec vec(const double* data, std::size_t n, const char* what) {
  if (n > 0) require(data, what);
  return hbft::Vec(data, data + n);
}

void copy_out(const hbft::Vec& src, double* dst) { std::copy(src.begin(), src.end(), dst); }

hbft::ParamMap params_or_empty(const hbft_params* params) {
  return params ? params->map : hbft::ParamMap{};
}

hbft::MechanicalParams mech_of(const hbft_mechanical* mech) {
  require(mech, "mechanical parameters");
  return {mech->mass, mech->gravity};
}

hbft::VectorField field_of(hbft_model model, const hbft_potential* p, const hbft_schedule* s,
                           const hbft_mechanical* mech) {
  require(p, "potential");
  require(s, "schedule");
  switch (model) {
    case HBFT_MODEL_HBFT: return hbft::make_hbft_field(p->value, s->value);
    case HBFT_MODEL_FULL_SURFACE:
      return hbft::make_full_surface_field(p->value, s->value, mech_of(mech));
  }
  throw hbft::InputError("unknown model");
}

hbft::IntegratorConfig config_of(const hbft_integrator_config* c) {
  require(c, "integrator config");
  hbft::IntegratorConfig cfg;
  switch (c->method) {
    case HBFT_METHOD_RK4: cfg.method = hbft::Method::rk4; break;
    case HBFT_METHOD_DOPRI45: cfg.method = hbft::Method::dopri45; break;
    default: throw hbft::InputError("unknown integration method");
  }
  cfg.step = c->step;
  cfg.abs_tol = c->abs_tol;
  cfg.rel_tol = c->rel_tol;
  cfg.h_min = c->h_min;
  cfg.h_max = c->h_max;
  cfg.t_max = c->t_max;
  cfg.sample_stride = c->sample_stride;
  if (c->sample_dt > 0.0) cfg.sample_dt = c->sample_dt;
  cfg.stop.stationarity_tol = c->stationarity_tol;
  cfg.stop.dwell = c->dwell;
  cfg.stop.divergence_radius = c->divergence_radius;
  cfg.stop.halt_on_contact_loss = c->halt_on_contact_loss != 0;
  return cfg;
}

hbft_termination termination_of(hbft::Termination t) {
  switch (t) {
    case hbft::Termination::t_max: return HBFT_TERM_T_MAX;
    case hbft::Termination::stationary: return HBFT_TERM_STATIONARY;
    case hbft::Termination::diverged: return HBFT_TERM_DIVERGED;
    case hbft::Termination::contact_lost: return HBFT_TERM_CONTACT_LOST;
  }
  return HBFT_TERM_T_MAX;
}

void fill(const hbft::CheckRecord& r, hbft_check_result* out) {
  require(out, "result");
  out->pass = r.pass ? 1 : 0;
  out->residual = r.residual;
  out->threshold = r.threshold;
  out->partial_certificate = r.partial_certificate ? 1 : 0;
}

hbft_premise premise_of(hbft::PremiseStatus s) {
  switch (s) {
    case hbft::PremiseStatus::holds: return HBFT_PREMISE_HOLDS;
    case hbft::PremiseStatus::violated: return HBFT_PREMISE_VIOLATED;
    case hbft::PremiseStatus::not_established: return HBFT_PREMISE_NOT_ESTABLISHED;
  }
  return HBFT_PREMISE_NOT_ESTABLISHED;
}

}  // namespace

extern "C" {

const char* hbft_version(void) { return "0.1.0"; }

const char* hbft_last_error(void) { return g_last_error.c_str(); }

// parameters -------------------------------------------------------------------

hbft_status hbft_params_create(hbft_params** out) {
  return guard([&] {
    require(out, "out");
    *out = new hbft_params{};
  });
}

void hbft_params_destroy(hbft_params* params) { delete params; }

hbft_status hbft_params_set(hbft_params* params, const char* key, const double* values,
                            size_t count) {
  return guard([&] {
    require(params, "params");
    require(key, "key");
    if (count == 0) throw hbft::InputError("parameter '" + std::string(key) + "' has no values");
    params->map.set(key, vec(values, count, "values"));
  });
}

// catalogues -------------------------------------------------------------------

size_t hbft_potential_catalogue_size(void) { return hbft::potential_catalogue().size(); }

hbft_status hbft_potential_catalogue_entry(size_t index, const char** name,
                                           const char** description) {
  return guard([&] {
    const auto& cat = hbft::potential_catalogue();
    if (index >= cat.size()) throw hbft::InputError("catalogue index out of range");
    if (name) *name = cat[index].name.c_str();
    if (description) *description = cat[index].description.c_str();
  });
}

size_t hbft_schedule_catalogue_size(void) { return hbft::schedule_catalogue().size(); }

hbft_status hbft_schedule_catalogue_entry(size_t index, const char** name,
                                          const char** description) {
  return guard([&] {
    const auto& cat = hbft::schedule_catalogue();
    if (index >= cat.size()) throw hbft::InputError("catalogue index out of range");
    if (name) *name = cat[index].name.c_str();
    if (description) *description = cat[index].description.c_str();
  });
}

// potentials -------------------------------------------------------------------

hbft_status hbft_potential_create(const char* name, const hbft_params* params,
                                  hbft_potential** out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = new hbft_potential{hbft::make_potential(name, params_or_empty(params))};
  });
}

void hbft_potential_destroy(hbft_potential* p) { delete p; }

size_t hbft_potential_dim(const hbft_potential* p) { return p ? p->value.dim() : 0; }

int hbft_potential_has_hessian(const hbft_potential* p) {
  return p && p->value.has_hessian() ? 1 : 0;
}

int hbft_potential_unbounded_below(const hbft_potential* p) {
  return p && p->value.unbounded_below() ? 1 : 0;
}

hbft_status hbft_potential_lower_bound(const hbft_potential* p, int* known, double* value) {
  return guard([&] {
    require(p, "potential");
    require(known, "known");
    const auto& lb = p->value.lower_bound();
    *known = lb ? 1 : 0;
    if (lb && value) *value = *lb;
  });
}

hbft_status hbft_potential_value(const hbft_potential* p, const double* x, size_t n,
                                 double* out) {
  return guard([&] {
    require(p, "potential");
    require(out, "out");
    *out = p->value.value(vec(x, n, "x"));
  });
}

hbft_status hbft_potential_gradient(const hbft_potential* p, const double* x, size_t n,
                                    double* grad_out) {
  return guard([&] {
    require(p, "potential");
    require(grad_out, "grad_out");
    copy_out(p->value.gradient(vec(x, n, "x")), grad_out);
  });
}

hbft_status hbft_potential_hessian_quadform(const hbft_potential* p, const double* x,
                                            const double* v, size_t n, double* out) {
  return guard([&] {
    require(p, "potential");
    require(out, "out");
    *out = p->value.hessian_quadform(vec(x, n, "x"), vec(v, n, "v"));
  });
}

hbft_status hbft_potential_validate_gradient(const hbft_potential* p, const double* x, size_t n,
                                             double h, double* residual) {
  return guard([&] {
    require(p, "potential");
    require(residual, "residual");
    *residual = hbft::validate_gradient(p->value, vec(x, n, "x"), h);
  });
}

// schedules --------------------------------------------------------------------

hbft_status hbft_schedule_create(const char* name, const hbft_params* params,
                                 hbft_schedule** out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    *out = new hbft_schedule{hbft::make_schedule(name, params_or_empty(params))};
  });
}

void hbft_schedule_destroy(hbft_schedule* s) { delete s; }

int hbft_schedule_has_derivative(const hbft_schedule* s) {
  return s && s->value.has_derivative() ? 1 : 0;
}

hbft_status hbft_schedule_lambda(const hbft_schedule* s, double t, double* out) {
  return guard([&] {
    require(s, "schedule");
    require(out, "out");
    *out = s->value.lambda_at(t);
  });
}

hbft_status hbft_schedule_lambda_dot(const hbft_schedule* s, double t, double* out) {
  return guard([&] {
    require(s, "schedule");
    require(out, "out");
    *out = s->value.lambda_dot_at(t);
  });
}

hbft_status hbft_schedule_verify(const hbft_schedule* s, double horizon, size_t grid_points,
                                 double bound_guess, double t1_guess, hbft_friction_report* out) {
  return guard([&] {
    require(s, "schedule");
    require(out, "out");
    const auto r =
        hbft::verify_friction_hypotheses(s->value, horizon, grid_points, bound_guess, t1_guess);
    out->grid_spacing = r.grid_spacing;
    out->max_increment = r.max_increment;
    out->continuity_threshold = r.continuity_threshold;
    out->continuity_ok = r.continuity_ok;
    out->bounded = r.bounded;
    out->max_after_t1 = r.max_after_t1;
    out->min_lambda = r.min_lambda;
    out->nonnegative = r.nonnegative;
    out->strictly_positive = r.strictly_positive;
    out->has_derivative = r.derivative_bounded.has_value();
    out->derivative_bounded = r.derivative_bounded.value_or(false);
    out->max_abs_derivative = r.max_abs_derivative;
  });
}

// dynamics ---------------------------------------------------------------------

hbft_status hbft_hbft_field(const hbft_potential* p, const hbft_schedule* s, double t,
                            const double* x, const double* v, size_t n, double* dx, double* dv) {
  return guard([&] {
    require(p, "potential");
    require(s, "schedule");
    require(dx, "dx");
    require(dv, "dv");
    const auto d = hbft::hbft_field(p->value, s->value, {t, vec(x, n, "x"), vec(v, n, "v")});
    copy_out(d.dx, dx);
    copy_out(d.dv, dv);
  });
}

hbft_status hbft_full_surface_field(const hbft_potential* p, const hbft_schedule* s,
                                    const hbft_mechanical* mech, double t, const double* x,
                                    const double* v, size_t n, double* dx, double* dv) {
  return guard([&] {
    require(p, "potential");
    require(s, "schedule");
    require(dx, "dx");
    require(dv, "dv");
    const auto d = hbft::full_surface_field(p->value, s->value, mech_of(mech),
                                            {t, vec(x, n, "x"), vec(v, n, "v")});
    copy_out(d.dx, dx);
    copy_out(d.dv, dv);
  });
}

hbft_status hbft_reaction_force(const hbft_potential* p, const hbft_mechanical* mech,
                                const double* x, const double* v, size_t n, double* magnitude,
                                int* contact_lost) {
  return guard([&] {
    require(p, "potential");
    require(magnitude, "magnitude");
    const auto r =
        hbft::reaction_force(p->value, mech_of(mech), {0.0, vec(x, n, "x"), vec(v, n, "v")});
    *magnitude = r.magnitude;
    if (contact_lost) *contact_lost = r.contact_lost ? 1 : 0;
  });
}

hbft_status hbft_energy(const hbft_potential* p, const double* x, const double* v, size_t n,
                        double* out) {
  return guard([&] {
    require(p, "potential");
    require(out, "out");
    *out = hbft::energy(p->value, {0.0, vec(x, n, "x"), vec(v, n, "v")});
  });
}

hbft_status hbft_dissipation_rate(const hbft_schedule* s, double t, const double* v, size_t n,
                                  double* out) {
  return guard([&] {
    require(s, "schedule");
    require(out, "out");
    *out = hbft::dissipation_rate(s->value, {t, {}, vec(v, n, "v")});
  });
}

// integration ------------------------------------------------------------------

void hbft_integrator_config_default(hbft_integrator_config* cfg) {
  if (!cfg) return;
  const hbft::IntegratorConfig d;
  cfg->method = HBFT_METHOD_DOPRI45;
  cfg->step = d.step;
  cfg->abs_tol = d.abs_tol;
  cfg->rel_tol = d.rel_tol;
  cfg->h_min = d.h_min;
  cfg->h_max = d.h_max;
  cfg->t_max = d.t_max;
  cfg->sample_stride = d.sample_stride;
  cfg->sample_dt = 0.0;
  cfg->stationarity_tol = d.stop.stationarity_tol;
  cfg->dwell = d.stop.dwell;
  cfg->divergence_radius = d.stop.divergence_radius;
  cfg->halt_on_contact_loss = d.stop.halt_on_contact_loss ? 1 : 0;
}

hbft_status hbft_integrate(hbft_model model, const hbft_potential* p, const hbft_schedule* s,
                           const hbft_mechanical* mech, const double* x0, const double* v0,
                           size_t n, const hbft_integrator_config* cfg, hbft_trajectory** out) {
  if (out) *out = nullptr;
  return guard([&] {
    require(out, "out");
    const hbft::VectorField field = field_of(model, p, s, mech);
    const hbft::PhaseState init{0.0, vec(x0, n, "x0"), vec(v0, n, "v0")};
    try {
      *out = new hbft_trajectory{hbft::integrate(field, p->value, s->value, init, config_of(cfg))};
    } catch (const hbft::StepUnderflowError& e) {
      *out = new hbft_trajectory{e.partial()};
      throw;
    }
  });
}

hbft_status hbft_step_rk4(hbft_model model, const hbft_potential* p, const hbft_schedule* s,
                          const hbft_mechanical* mech, double t, const double* x,
                          const double* v, size_t n, double h, double* x_out, double* v_out) {
  return guard([&] {
    require(x_out, "x_out");
    require(v_out, "v_out");
    const auto next =
        hbft::step_rk4(field_of(model, p, s, mech), {t, vec(x, n, "x"), vec(v, n, "v")}, h);
    copy_out(next.x, x_out);
    copy_out(next.v, v_out);
  });
}

void hbft_trajectory_destroy(hbft_trajectory* traj) { delete traj; }

size_t hbft_trajectory_size(const hbft_trajectory* traj) {
  return traj ? traj->value.samples.size() : 0;
}

size_t hbft_trajectory_dim(const hbft_trajectory* traj) { return traj ? traj->value.dim : 0; }

hbft_termination hbft_trajectory_termination(const hbft_trajectory* traj) {
  return traj ? termination_of(traj->value.termination) : HBFT_TERM_T_MAX;
}

hbft_status hbft_trajectory_sample(const hbft_trajectory* traj, size_t index,
                                   hbft_sample_info* info, double* x_out, double* v_out) {
  return guard([&] {
    require(traj, "trajectory");
    if (index >= traj->value.samples.size()) throw hbft::InputError("sample index out of range");
    const auto& s = traj->value.samples[index];
    if (info) *info = {s.t, s.energy, s.lambda, s.grad_norm, s.dissipation};
    if (x_out) copy_out(s.x, x_out);
    if (v_out) copy_out(s.v, v_out);
  });
}

hbft_status hbft_trajectory_step_stats(const hbft_trajectory* traj, size_t* accepted,
                                       size_t* rejected, double* min_step, double* max_step) {
  return guard([&] {
    require(traj, "trajectory");
    const auto& st = traj->value.stats;
    if (accepted) *accepted = st.accepted;
    if (rejected) *rejected = st.rejected;
    if (min_step) *min_step = st.accepted ? st.min_step : 0.0;
    if (max_step) *max_step = st.max_step;
  });
}

hbft_status hbft_trajectory_write_csv(const hbft_trajectory* traj, const char* path) {
  return guard([&] {
    require(traj, "trajectory");
    require(path, "path");
    hbft::write_trajectory_csv(traj->value, std::filesystem::path(path));
  });
}

// diagnostics ------------------------------------------------------------------

hbft_status hbft_check_energy_monotone(const hbft_trajectory* traj, double tol,
                                       hbft_check_result* out) {
  return guard([&] {
    require(traj, "trajectory");
    fill(hbft::check_energy_monotone(traj->value, tol), out);
  });
}

hbft_status hbft_check_energy_balance(const hbft_trajectory* traj, const hbft_schedule* s,
                                      double threshold, hbft_check_result* out) {
  return guard([&] {
    require(traj, "trajectory");
    require(s, "schedule");
    fill(hbft::energy_balance_residual(traj->value, s->value, threshold), out);
  });
}

hbft_status hbft_check_velocity_bound(const hbft_trajectory* traj, const hbft_potential* p,
                                      double tol, hbft_check_result* out) {
  return guard([&] {
    require(traj, "trajectory");
    require(p, "potential");
    fill(hbft::check_velocity_bound(traj->value, p->value, tol), out);
  });
}

hbft_status hbft_check_acceleration_bound(const hbft_trajectory* traj, const hbft_potential* p,
                                          const hbft_schedule* s, double bound,
                                          hbft_check_result* out) {
  return guard([&] {
    require(traj, "trajectory");
    require(p, "potential");
    require(s, "schedule");
    fill(hbft::check_acceleration_bound(traj->value, p->value, s->value, bound), out);
  });
}

hbft_status hbft_check_model_discrepancy(const hbft_trajectory* full,
                                         const hbft_trajectory* reduced, double threshold,
                                         hbft_check_result* out) {
  return guard([&] {
    require(full, "full");
    require(reduced, "reduced");
    fill(hbft::model_discrepancy(full->value, reduced->value, threshold), out);
  });
}

hbft_status hbft_tail_asymptotics(const hbft_trajectory* traj, const hbft_schedule* s,
                                  const hbft_potential* p, double tail_fraction,
                                  hbft_tail_report* out) {
  return guard([&] {
    require(traj, "trajectory");
    require(s, "schedule");
    require(p, "potential");
    require(out, "out");
    const auto r = hbft::tail_asymptotics(traj->value, s->value, p->value, tail_fraction);
    *out = {r.tail_sup_sqrt_lambda_v, r.tail_sup_grad, r.sup_v, r.sup_x, r.dissipation_integral,
            r.premise_unverified ? 1 : 0};
  });
}

hbft_status hbft_barbalat_check(const double* t, const double* f, const double* df,
                                size_t count, const hbft_barbalat_budgets* budgets,
                                hbft_barbalat_report* out) {
  return guard([&] {
    require(budgets, "budgets");
    require(out, "out");
    hbft::SampledFunction sf{vec(t, count, "t"), vec(f, count, "f"), {}};
    if (df) sf.derivative.assign(df, df + count);
    const hbft::BarbalatBudgets b{budgets->l2, budgets->linf, budgets->derivative,
                                  budgets->tail_threshold, budgets->tail_fraction};
    const auto r = hbft::barbalat_check(sf, b);
    *out = {premise_of(r.l2), premise_of(r.linf), premise_of(r.derivative),
            r.conclusion ? 1 : 0, r.l2_integral, r.sup_abs, r.sup_abs_derivative,
            r.tail_sup_abs};
  });
}

// scenarios --------------------------------------------------------------------

hbft_status hbft_scenario_load(const char* path, hbft_scenario** out) {
  if (out) *out = nullptr;
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new hbft_scenario{hbft::load_scenario(path)};
  });
}

hbft_status hbft_scenario_parse(const char* yaml_text, hbft_scenario** out) {
  if (out) *out = nullptr;
  return guard([&] {
    require(yaml_text, "yaml_text");
    require(out, "out");
    *out = new hbft_scenario{hbft::parse_scenario(yaml_text)};
  });
}

void hbft_scenario_destroy(hbft_scenario* sc) { delete sc; }

const char* hbft_scenario_name(const hbft_scenario* sc) {
  return sc ? sc->config.name.c_str() : "";
}

hbft_status hbft_scenario_validate(const hbft_scenario* sc) {
  return guard([&] {
    require(sc, "scenario");
    hbft::resolve_scenario(sc->config);
  });
}

hbft_status hbft_scenario_run(const hbft_scenario* sc, const char* out_dir, hbft_run** out) {
  if (out) *out = nullptr;
  return guard([&] {
    require(sc, "scenario");
    require(out_dir, "out_dir");
    require(out, "out");
    auto run = std::make_unique<hbft_run>();
    run->outcome = hbft::run_scenario(sc->config, out_dir);
    run->trajectory.value = run->outcome.trajectory;
    run->csv_path = run->outcome.csv_path.string();
    run->report_path = run->outcome.report_path.string();
    *out = run.release();
  });
}

void hbft_run_destroy(hbft_run* run) { delete run; }

int hbft_run_exit_code(const hbft_run* run) {
  return run ? static_cast<int>(run->outcome.exit) : 2;
}

const char* hbft_run_summary(const hbft_run* run) {
  return run ? run->outcome.summary.c_str() : "";
}

const char* hbft_run_csv_path(const hbft_run* run) { return run ? run->csv_path.c_str() : ""; }

const char* hbft_run_report_path(const hbft_run* run) {
  return run ? run->report_path.c_str() : "";
}

const hbft_trajectory* hbft_run_trajectory(const hbft_run* run) {
  return run ? &run->trajectory : nullptr;
}

size_t hbft_run_check_count(const hbft_run* run) {
  return run ? run->outcome.report.checks.size() : 0;
}

hbft_status hbft_run_check(const hbft_run* run, size_t index, const char** name,
                           hbft_check_result* out) {
  return guard([&] {
    require(run, "run");
    const auto& checks = run->outcome.report.checks;
    if (index >= checks.size()) throw hbft::InputError("check index out of range");
    if (name) *name = checks[index].name.c_str();
    fill(checks[index], out);
  });
}

// sweeps -----------------------------------------------------------------------

hbft_status hbft_sweep_run(const hbft_scenario* base, const char* grid_path, const char* out_dir,
                           unsigned workers, hbft_sweep** out) {
  if (out) *out = nullptr;
  return guard([&] {
    require(base, "scenario");
    require(grid_path, "grid_path");
    require(out_dir, "out_dir");
    require(out, "out");
    const auto grid = hbft::load_sweep_grid(grid_path);
    auto sweep = std::make_unique<hbft_sweep>();
    sweep->outcome = hbft::run_sweep(base->config, grid, out_dir, workers);
    sweep->table = hbft::sweep_table_csv(grid, sweep->outcome);
    sweep->table_path = sweep->outcome.table_path.string();
    *out = sweep.release();
  });
}

void hbft_sweep_destroy(hbft_sweep* sweep) { delete sweep; }

int hbft_sweep_exit_code(const hbft_sweep* sweep) {
  return sweep ? static_cast<int>(sweep->outcome.exit) : 2;
}

size_t hbft_sweep_size(const hbft_sweep* sweep) {
  return sweep ? sweep->outcome.rows.size() : 0;
}

hbft_status hbft_sweep_get_row(const hbft_sweep* sweep, size_t index, hbft_sweep_row* out) {
  return guard([&] {
    require(sweep, "sweep");
    require(out, "out");
    if (index >= sweep->outcome.rows.size()) throw hbft::InputError("row index out of range");
    const auto& r = sweep->outcome.rows[index];
    out->ok = r.ok ? 1 : 0;
    out->exit_code = static_cast<int>(r.exit);
    out->termination = r.termination ? termination_of(*r.termination) : HBFT_TERM_T_MAX;
    out->t_final = r.t_final;
    out->final_energy = r.final_energy;
    out->tail_sqrt_lambda_v = r.tail_sqrt_lambda_v;
    out->checks_pass = r.checks_pass ? 1 : 0;
  });
}

const char* hbft_sweep_table(const hbft_sweep* sweep) {
  return sweep ? sweep->table.c_str() : "";
}

const char* hbft_sweep_table_path(const hbft_sweep* sweep) {
  return sweep ? sweep->table_path.c_str() : "";
}

}  // extern "C"
