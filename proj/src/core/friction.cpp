#include "core/friction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace hbft {

FrictionSchedule::FrictionSchedule(Definition def) : def_(std::move(def)) {
  if (!def_.lambda) throw InputError("schedule '" + def_.name + "': lambda is required");
}

double FrictionSchedule::lambda_at(double t) const {
  if (!(t >= 0.0))
    throw InputError("schedule '" + def_.name + "': lambda_at requires t >= 0");
  const double value = def_.lambda(t);
  if (def_.claims_nonnegative && value < 0.0)
    throw ConsistencyError("schedule '" + def_.name + "' claims nonnegativity but lambda(" +
                           std::to_string(t) + ") = " + std::to_string(value));
  return value;
}

double FrictionSchedule::lambda_dot_at(double t) const {
  if (!has_derivative())
    throw CapabilityError("schedule '" + def_.name + "' has no derivative");
  if (!(t >= 0.0))
    throw InputError("schedule '" + def_.name + "': lambda_dot_at requires t >= 0");
  return def_.lambda_dot(t);
}

FrictionHypothesisReport verify_friction_hypotheses(const FrictionSchedule& s, double horizon,
                                                    std::size_t grid_points,
                                                    double bound_guess, double t1_guess) {
  if (grid_points < 2) throw InputError("verify_friction_hypotheses: grid_points must be >= 2");
  if (!(t1_guess >= 0.0)) throw InputError("verify_friction_hypotheses: t1 must be >= 0");
  if (!(horizon > t1_guess))
    throw InputError("verify_friction_hypotheses: horizon must exceed t1");
  if (!(bound_guess > 0.0)) throw InputError("verify_friction_hypotheses: bound must be > 0");

  FrictionHypothesisReport r;
  r.grid_spacing = horizon / static_cast<double>(grid_points - 1);
  r.min_lambda = std::numeric_limits<double>::infinity();
  r.max_after_t1 = -std::numeric_limits<double>::infinity();
  r.bounded = true;

  std::vector<double> slopes;
  slopes.reserve(grid_points - 1);
  double prev = 0.0;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double t = static_cast<double>(k) * r.grid_spacing;
    // A negative lambda on a claiming schedule is reported, not thrown.
    double value;
    try {
      value = s.lambda_at(t);
    } catch (const ConsistencyError&) {
      value = -std::numeric_limits<double>::infinity();
    }
    r.min_lambda = std::min(r.min_lambda, value);
    if (t >= t1_guess) {
      r.max_after_t1 = std::max(r.max_after_t1, value);
      if (value > bound_guess) r.bounded = false;
    }
    if (k > 0) {
      const double inc = std::abs(value - prev);
      r.max_increment = std::max(r.max_increment, inc);
      slopes.push_back(inc / r.grid_spacing);
    }
    if (s.has_derivative()) {
      const double d = std::abs(s.lambda_dot_at(t));
      r.max_abs_derivative = std::max(r.max_abs_derivative, d);
    }
    prev = value;
  }

  double slope_estimate;
  if (s.has_derivative()) {
    slope_estimate = r.max_abs_derivative;
  } else {
    // Median sampled slope: isolated jumps do not inflate the estimate.
    std::nth_element(slopes.begin(), slopes.begin() + slopes.size() / 2, slopes.end());
    slope_estimate = slopes[slopes.size() / 2];
  }
  r.continuity_threshold = 10.0 * r.grid_spacing * slope_estimate;
  r.continuity_ok = r.max_increment <= r.continuity_threshold + 1e-12;
  r.nonnegative = r.min_lambda >= 0.0;
  r.strictly_positive = r.min_lambda > 0.0;
  if (s.has_derivative()) r.derivative_bounded = std::isfinite(r.max_abs_derivative);
  return r;
}

double validate_lambda_derivative(const FrictionSchedule& s, double horizon,
                                  std::size_t grid_points, double h) {
  if (!(horizon > 0.0) || grid_points < 2 || !(h > 0.0))
    throw InputError("validate_lambda_derivative: bad grid");
  const double dt = horizon / static_cast<double>(grid_points - 1);
  double residual = 0.0;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double fd = t >= h ? (s.lambda_at(t + h) - s.lambda_at(t - h)) / (2.0 * h)
                             : (-3.0 * s.lambda_at(t) + 4.0 * s.lambda_at(t + h) -
                                s.lambda_at(t + 2.0 * h)) / (2.0 * h);
    residual = std::max(residual, std::abs(fd - s.lambda_dot_at(t)));
  }
  return residual;
}

namespace {

FrictionSchedule constant(const ParamMap& params) {
  params.require_known("constant", {"lambda0"});
  const double c = params.scalar("lambda0", 1.0);
  if (!(c >= 0.0)) throw InputError("constant: 'lambda0' must be >= 0");
  return FrictionSchedule({"constant", [c](double) { return c; }, [](double) { return 0.0; },
                           params, true, true});
}

// lambda0 / (1 + t)^alpha
FrictionSchedule power_decay(const ParamMap& params) {
  params.require_known("power_decay", {"lambda0", "alpha"});
  const double l0 = params.scalar("lambda0", 1.0);
  const double alpha = params.scalar("alpha", 1.0);
  if (!(l0 >= 0.0)) throw InputError("power_decay: 'lambda0' must be >= 0");
  if (!(alpha >= 0.0)) throw InputError("power_decay: 'alpha' must be >= 0");
  return FrictionSchedule({"power_decay",
                           [l0, alpha](double t) { return l0 / std::pow(1.0 + t, alpha); },
                           [l0, alpha](double t) {
                             return -alpha * l0 / std::pow(1.0 + t, alpha + 1.0);
                           },
                           params, true, true});
}

// a + b sin(omega t), a >= b >= 0; a == b touches zero.
FrictionSchedule oscillating(const ParamMap& params) {
  params.require_known("oscillating", {"a", "b", "omega"});
  const double a = params.scalar("a", 2.0);
  const double b = params.scalar("b", 1.0);
  const double w = params.scalar("omega", 1.0);
  if (!(b >= 0.0) || !(a >= b))
    throw InputError("oscillating: requires a >= b >= 0 (got a=" + std::to_string(a) +
                     ", b=" + std::to_string(b) + ")");
  return FrictionSchedule({"oscillating",
                           [a, b, w](double t) { return std::max(0.0, a + b * std::sin(w * t)); },
                           [b, w](double t) { return b * w * std::cos(w * t); }, params, true,
                           true});
}

// values[k] on [breakpoints[k-1], breakpoints[k]); no derivative.
FrictionSchedule step(const ParamMap& params) {
  params.require_known("step", {"values", "breakpoints"});
  const std::vector<double> values = params.list("values");
  const std::vector<double> breaks = params.list("breakpoints", {});
  if (values.empty()) throw InputError("step: 'values' must be non-empty");
  if (breaks.size() + 1 != values.size())
    throw InputError("step: need exactly one fewer breakpoint than values");
  for (double v : values)
    if (!(v >= 0.0)) throw InputError("step: 'values' must be >= 0");
  for (std::size_t i = 0; i < breaks.size(); ++i)
    if (!(breaks[i] > (i == 0 ? 0.0 : breaks[i - 1])))
      throw InputError("step: 'breakpoints' must be positive and strictly increasing");
  return FrictionSchedule({"step",
                           [values, breaks](double t) {
                             const auto k = std::upper_bound(breaks.begin(), breaks.end(), t) -
                                            breaks.begin();
                             return values[static_cast<std::size_t>(k)];
                           },
                           {}, params, true, true});
}

// lambda0 + slope * t: violates eventual boundedness when slope > 0.
FrictionSchedule linear_growth(const ParamMap& params) {
  params.require_known("linear_growth", {"lambda0", "slope"});
  const double l0 = params.scalar("lambda0", 0.0);
  const double slope = params.scalar("slope", 1.0);
  if (!(l0 >= 0.0) || !(slope >= 0.0))
    throw InputError("linear_growth: 'lambda0' and 'slope' must be >= 0");
  return FrictionSchedule({"linear_growth", [l0, slope](double t) { return l0 + slope * t; },
                           [slope](double) { return slope; }, params, true, slope == 0.0});
}

struct Builtin {
  CatalogueEntry entry;
  FrictionSchedule (*make)(const ParamMap&);
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = {
      {{"constant", "lambda0; params lambda0=1"}, constant},
      {{"power_decay", "lambda0/(1+t)^alpha; params lambda0=1, alpha=1"}, power_decay},
      {{"oscillating", "a + b sin(omega t), a >= b >= 0; params a=2, b=1, omega=1"},
       oscillating},
      {{"step",
        "piecewise constant, no derivative; params values (list), breakpoints (list)"},
       step},
      {{"linear_growth", "lambda0 + slope t, unbounded; params lambda0=0, slope=1"},
       linear_growth},
  };
  return table;
}

}  // namespace

const std::vector<CatalogueEntry>& schedule_catalogue() {
  static const std::vector<CatalogueEntry> entries = [] {
    std::vector<CatalogueEntry> out;
    for (const auto& b : builtins()) out.push_back(b.entry);
    return out;
  }();
  return entries;
}

FrictionSchedule make_schedule(const std::string& name, const ParamMap& params) {
  for (const auto& b : builtins())
    if (b.entry.name == name) return b.make(params);
  throw InputError("unknown schedule '" + name + "'");
}

}  // namespace hbft
