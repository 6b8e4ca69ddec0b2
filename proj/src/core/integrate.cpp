#include "core/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hbft {

const char* to_string(Method m) {
  switch (m) {
    case Method::rk4: return "rk4";
    case Method::dopri45: return "dopri45";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& text) {
  if (text == "rk4") return Method::rk4;
  if (text == "dopri45") return Method::dopri45;
  return std::nullopt;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::t_max: return "t_max";
    case Termination::stationary: return "stationary";
    case Termination::diverged: return "diverged";
    case Termination::contact_lost: return "contact_lost";
  }
  return "?";
}

void validate(const IntegratorConfig& cfg) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InputError(std::string("integrator: '") + name + "' must be a positive number");
  };
  positive(cfg.t_max, "t_max");
  if (cfg.method == Method::rk4) {
    positive(cfg.step, "step");
  } else {
    positive(cfg.abs_tol, "abs_tol");
    positive(cfg.rel_tol, "rel_tol");
    positive(cfg.h_min, "h_min");
    positive(cfg.h_max, "h_max");
    if (cfg.h_min > cfg.h_max) throw InputError("integrator: h_min exceeds h_max");
  }
  if (cfg.sample_stride < 1) throw InputError("integrator: 'sample_stride' must be >= 1");
  if (cfg.sample_dt) positive(*cfg.sample_dt, "sample_dt");
  positive(cfg.stop.stationarity_tol, "stationarity_tol");
  positive(cfg.stop.dwell, "dwell");
  positive(cfg.stop.divergence_radius, "divergence_radius");
}

Sample make_sample(const Potential& p, const FrictionSchedule& s, const PhaseState& state) {
  Sample out;
  out.t = state.t;
  out.x = state.x;
  out.v = state.v;
  out.energy = energy(p, state);
  out.lambda = s.lambda_at(state.t);
  out.grad_norm = norm(p.gradient(state.x));
  out.dissipation = -out.lambda * dot(state.v, state.v);
  return out;
}

namespace {

// y = [x; v] packing for the Runge-Kutta stages.
using Flat = std::vector<double>;

PhaseState unpack(double t, const Flat& y, std::size_t n) {
  return {t, Vec(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)),
          Vec(y.begin() + static_cast<std::ptrdiff_t>(n), y.end())};
}

Flat pack(const PhaseState& s) {
  Flat y(s.x);
  y.insert(y.end(), s.v.begin(), s.v.end());
  return y;
}

Flat eval(const VectorField& f, double t, const Flat& y, std::size_t n) {
  StateDerivative d = f(unpack(t, y, n));
  Flat out(std::move(d.dx));
  out.insert(out.end(), d.dv.begin(), d.dv.end());
  return out;
}

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// fifth-order weights minus embedded fourth-order weights
constexpr std::array<double, 7> kE = {71.0 / 57600,      0.0,          -71.0 / 16695,
                                      71.0 / 1920,       -17253.0 / 339200, 22.0 / 525,
                                      -1.0 / 40};

class Recorder {
 public:
  Recorder(const Potential& p, const FrictionSchedule& s, const IntegratorConfig& cfg,
           Trajectory& traj)
      : p_(p), s_(s), cfg_(cfg), traj_(traj) {}

  void initial(const PhaseState& y) {
    traj_.samples.push_back(make_sample(p_, s_, y));
    if (cfg_.sample_dt) next_t_ = *cfg_.sample_dt;
  }

  // Called after each accepted step; returns the record for stop checks.
  const Sample& accepted(const PhaseState& y, std::size_t step_index) {
    last_ = make_sample(p_, s_, y);
    bool keep;
    if (cfg_.sample_dt) {
      keep = y.t >= next_t_ * (1.0 - 1e-12);
      if (keep) next_t_ = (std::floor(y.t / *cfg_.sample_dt + 1e-9) + 1.0) * *cfg_.sample_dt;
    } else {
      keep = step_index % cfg_.sample_stride == 0;
    }
    if (keep) traj_.samples.push_back(*last_);
    return *last_;
  }

  // The final accepted state is always part of the trajectory.
  void finish() {
    if (last_ && traj_.samples.back().t < last_->t) traj_.samples.push_back(*last_);
  }

 private:
  const Potential& p_;
  const FrictionSchedule& s_;
  const IntegratorConfig& cfg_;
  Trajectory& traj_;
  double next_t_ = 0.0;
  std::optional<Sample> last_;
};

class StopMonitor {
 public:
  StopMonitor(const VectorField& field, const StopCondition& stop, Trajectory& traj)
      : field_(field), stop_(stop), traj_(traj) {}

  // Returns a termination reason when a stop rule fires.
  std::optional<Termination> check(const PhaseState& y, const Sample& rec) {
    if (norm(y.x) > stop_.divergence_radius) return Termination::diverged;
    if (field_.monitors_contact() && field_.contact(y).contact_lost) {
      ++traj_.contact_loss_steps;
      if (!traj_.first_contact_loss_t) traj_.first_contact_loss_t = y.t;
      if (stop_.halt_on_contact_loss) return Termination::contact_lost;
    }
    const bool still = norm(y.v) <= stop_.stationarity_tol &&
                       rec.grad_norm <= stop_.stationarity_tol;
    if (!still) {
      since_ = kNever;
    } else {
      if (since_ == kNever) since_ = y.t;
      if (y.t - since_ >= stop_.dwell) return Termination::stationary;
    }
    return std::nullopt;
  }

 private:
  const VectorField& field_;
  const StopCondition& stop_;
  Trajectory& traj_;
  static constexpr double kNever = -1.0;  // times are nonnegative
  double since_ = kNever;
};

void note_step(StepStats& st, double h) {
  ++st.accepted;
  st.min_step = std::min(st.min_step, h);
  st.max_step = std::max(st.max_step, h);
}

bool finished(double t, double t_max) { return t_max - t <= 1e-12 * std::max(1.0, t_max); }

void run_fixed(const VectorField& field, const IntegratorConfig& cfg, PhaseState y,
               Recorder& rec, StopMonitor& stop, Trajectory& traj) {
  CompensatedSum clock(0.0);
  std::size_t k = 0;
  while (!finished(y.t, cfg.t_max)) {
    const double h = std::min(cfg.step, cfg.t_max - y.t);
    PhaseState next;
    try {
      next = step_rk4(field, y, h);
    } catch (const DivergenceError&) {
      traj.termination = Termination::diverged;
      return;
    }
    clock.add(h);
    next.t = clock.value();
    y = std::move(next);
    note_step(traj.stats, h);
    const Sample& s = rec.accepted(y, ++k);
    if (auto why = stop.check(y, s)) {
      traj.termination = *why;
      return;
    }
  }
  traj.termination = Termination::t_max;
}

double scaled_rms(const Flat& err, const Flat& y0, const Flat& y1, double atol, double rtol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    acc += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step(const VectorField& field, const IntegratorConfig& cfg, double t,
                    const Flat& y, const Flat& f0, std::size_t n) {
  Flat sc(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) sc[i] = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
  auto rms = [&](const Flat& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] / sc[i]) * (a[i] / sc[i]);
    return std::sqrt(acc / static_cast<double>(a.size()));
  };
  const double d0 = rms(y), d1 = rms(f0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, cfg.h_max);
  Flat y1(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) y1[i] = y[i] + h0 * f0[i];
  double d2 = 0.0;
  try {
    Flat f1 = eval(field, t + h0, y1, n);
    for (std::size_t i = 0; i < f1.size(); ++i) f1[i] -= f0[i];
    d2 = rms(f1) / h0;
  } catch (const DivergenceError&) {
    return std::max(cfg.h_min, h0);
  }
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::clamp(std::min(100.0 * h0, h1), cfg.h_min, cfg.h_max);
}

void run_adaptive(const VectorField& field, const IntegratorConfig& cfg, PhaseState state,
                  Recorder& rec, StopMonitor& stop, Trajectory& traj) {
  const std::size_t n = field.dim();
  const std::size_t m = 2 * n;
  CompensatedSum clock(0.0);
  Flat y = pack(state);
  Flat k1 = eval(field, 0.0, y, n);
  double h = initial_step(field, cfg, 0.0, y, k1, n);
  std::size_t accepted = 0;
  std::array<Flat, 7> k;
  Flat stage(m), y_new(m), err(m);

  while (!finished(state.t, cfg.t_max)) {
    const double t = state.t;
    const bool last = t + h >= cfg.t_max;
    if (last) h = cfg.t_max - t;

    k[0] = k1;
    bool finite = true;
    try {
      for (std::size_t s = 1; s < 7; ++s) {
        for (std::size_t i = 0; i < m; ++i) {
          double acc = 0.0;
          for (std::size_t j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
          stage[i] = y[i] + h * acc;
        }
        if (s == 6) y_new = stage;  // FSAL: row 7 is the 5th-order solution
        k[s] = eval(field, t + kC[s] * h, stage, n);
      }
    } catch (const DivergenceError&) {
      finite = false;
    }

    double err_norm = std::numeric_limits<double>::infinity();
    if (finite) {
      for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < 7; ++j) acc += kE[j] * k[j][i];
        err[i] = h * acc;
      }
      err_norm = scaled_rms(err, y, y_new, cfg.abs_tol, cfg.rel_tol);
      if (!std::isfinite(err_norm)) err_norm = std::numeric_limits<double>::infinity();
    }

    if (err_norm <= 1.0) {
      if (last) {
        clock = CompensatedSum(cfg.t_max);
      } else {
        clock.add(h);
      }
      y = y_new;
      k1 = k[6];
      state = unpack(clock.value(), y, n);
      note_step(traj.stats, h);
      const Sample& s = rec.accepted(state, ++accepted);
      if (auto why = stop.check(state, s)) {
        traj.termination = *why;
        return;
      }
      const double factor =
          err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      h = std::min(h * factor, cfg.h_max);
    } else {
      ++traj.stats.rejected;
      const double factor =
          std::isfinite(err_norm) ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0) : 0.2;
      h *= factor;
      if (h < cfg.h_min) {
        if (!finite) {
          traj.termination = Termination::diverged;
          return;
        }
        rec.finish();
        throw StepUnderflowError("step size fell below h_min=" + std::to_string(cfg.h_min) +
                                     " at t=" + std::to_string(t) +
                                     " without meeting the error tolerance",
                                 traj);
      }
    }
  }
  traj.termination = Termination::t_max;
}

}  // namespace

PhaseState step_rk4(const VectorField& field, const PhaseState& state, double h) {
  if (!(h > 0.0)) throw InputError("step_rk4: h must be > 0");
  const std::size_t n = field.dim();
  const Flat y = pack(state);
  const std::size_t m = y.size();
  Flat tmp(m);

  const Flat k1 = eval(field, state.t, y, n);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  const Flat k2 = eval(field, state.t + 0.5 * h, tmp, n);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  const Flat k3 = eval(field, state.t + 0.5 * h, tmp, n);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
  const Flat k4 = eval(field, state.t + h, tmp, n);

  Flat out(m);
  for (std::size_t i = 0; i < m; ++i)
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  if (!all_finite(out))
    throw DivergenceError("non-finite state after RK4 step at t=" + std::to_string(state.t));
  return unpack(state.t + h, out, n);
}

Trajectory integrate(const VectorField& field, const Potential& p, const FrictionSchedule& s,
                     const PhaseState& initial, const IntegratorConfig& cfg) {
  validate(cfg);
  if (initial.t != 0.0) throw InputError("integrate: initial state must be at t = 0");
  if (field.dim() != p.dim() || initial.x.size() != p.dim() || initial.v.size() != p.dim())
    throw InputError("integrate: dimension mismatch between field, potential and state");
  if (!all_finite(initial.x) || !all_finite(initial.v))
    throw InputError("integrate: initial state must be finite");

  Trajectory traj;
  traj.dim = p.dim();
  traj.model = field.kind();
  Recorder rec(p, s, cfg, traj);
  StopMonitor stop(field, cfg.stop, traj);
  rec.initial(initial);

  if (auto why = stop.check(initial, traj.samples.front())) {
    // A start beyond the divergence radius or with contact already lost.
    if (*why != Termination::stationary) {
      traj.termination = *why;
      return traj;
    }
  }

  if (cfg.method == Method::rk4)
    run_fixed(field, cfg, initial, rec, stop, traj);
  else
    run_adaptive(field, cfg, initial, rec, stop, traj);
  rec.finish();
  return traj;
}

}  // namespace hbft
