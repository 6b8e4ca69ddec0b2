#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "core/dynamics.hpp"
#include "core/error.hpp"

namespace hbft {

enum class Method { rk4, dopri45 };

const char* to_string(Method m);
std::optional<Method> parse_method(const std::string& text);

/// Stop rules checked after every accepted step. Stationarity means both
/// |v| and |grad Phi(x)| stay at or below `stationarity_tol` for `dwell`
/// time units; a dwell longer than t_max disables the rule.
struct StopCondition {
  double stationarity_tol = 1e-6;
  double dwell = 1.0;
  double divergence_radius = 1e6;
  bool halt_on_contact_loss = false;
};

/// Integrator settings. Stiff friction (large lambda) is handled by step
/// reduction only; keep lambda * step below ~1 for the fixed-step method.
struct IntegratorConfig {
  Method method = Method::dopri45;
  double step = 1e-3;  // fixed-step size (rk4)
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double h_min = 1e-12;
  double h_max = 0.1;
  double t_max = 10.0;
  std::size_t sample_stride = 1;
  std::optional<double> sample_dt;  // overrides the stride when set
  StopCondition stop;
};

void validate(const IntegratorConfig& cfg);

enum class Termination { t_max, stationary, diverged, contact_lost };

const char* to_string(Termination t);

struct Sample {
  double t = 0.0;
  Vec x;
  Vec v;
  double energy = 0.0;
  double lambda = 0.0;
  double grad_norm = 0.0;
  double dissipation = 0.0;
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
};

struct Trajectory {
  std::size_t dim = 0;
  ModelKind model = ModelKind::hbft;
  std::vector<Sample> samples;
  Termination termination = Termination::t_max;
  StepStats stats;
  std::size_t contact_loss_steps = 0;  // accepted steps with R <= 0
  std::optional<double> first_contact_loss_t;

  double t_final() const { return samples.empty() ? 0.0 : samples.back().t; }
};

/// Builds the per-sample record for a state.
Sample make_sample(const Potential& p, const FrictionSchedule& s, const PhaseState& state);

/// Thrown when the adaptive controller needs a step below h_min. Carries
/// the trajectory up to the failure point.
class StepUnderflowError : public Error {
 public:
  StepUnderflowError(const std::string& what, Trajectory partial)
      : Error(ErrorKind::integration, what), partial_(std::move(partial)) {}

  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// One classical Runge-Kutta step; t advances by exactly h.
/// Throws DivergenceError if the result is not finite.
PhaseState step_rk4(const VectorField& field, const PhaseState& state, double h);

/// Integrates from `initial` (t = 0) until a stop rule fires. Divergence is
/// reported through `termination`, not thrown.
Trajectory integrate(const VectorField& field, const Potential& p, const FrictionSchedule& s,
                     const PhaseState& initial, const IntegratorConfig& cfg);

}  // namespace hbft
