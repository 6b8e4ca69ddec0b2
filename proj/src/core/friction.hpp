#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/params.hpp"
#include "core/potentials.hpp"

namespace hbft {

/// Time-dependent viscous friction coefficient lambda(t), t >= 0.
class FrictionSchedule {
 public:
  using Fn = std::function<double(double)>;

  struct Definition {
    std::string name;
    Fn lambda;
    Fn lambda_dot;  // optional
    ParamMap params;
    bool claims_nonnegative = true;
    bool claims_bounded = true;
  };

  explicit FrictionSchedule(Definition def);

  const std::string& name() const { return def_.name; }
  const ParamMap& params() const { return def_.params; }
  bool claims_nonnegative() const { return def_.claims_nonnegative; }
  bool claims_bounded() const { return def_.claims_bounded; }
  bool has_derivative() const { return static_cast<bool>(def_.lambda_dot); }

  /// Throws InputError for t < 0 and ConsistencyError if a schedule that
  /// claims nonnegativity returns a negative value.
  double lambda_at(double t) const;

  /// Throws CapabilityError when the schedule has no derivative.
  double lambda_dot_at(double t) const;

 private:
  Definition def_;
};

/// Sampled surrogate for the friction hypotheses: continuity on [0, horizon]
/// and eventual boundedness lambda(t) <= bound_guess for t >= t1_guess.
/// A failed hypothesis is a field of the report, never an exception.
struct FrictionHypothesisReport {
  double grid_spacing = 0.0;
  double max_increment = 0.0;          // max |lambda(t_{k+1}) - lambda(t_k)|
  double continuity_threshold = 0.0;   // 10 * spacing * estimated slope
  bool continuity_ok = false;
  bool bounded = false;                // lambda(t) <= bound_guess for sampled t >= t1
  double max_after_t1 = 0.0;
  double min_lambda = 0.0;
  bool nonnegative = false;
  bool strictly_positive = false;      // false when a sampled zero was seen
  std::optional<bool> derivative_bounded;  // present iff lambda_dot exists
  double max_abs_derivative = 0.0;
};

FrictionHypothesisReport verify_friction_hypotheses(const FrictionSchedule& s, double horizon,
                                                    std::size_t grid_points,
                                                    double bound_guess, double t1_guess);

/// max |lambda_dot(t) - central difference of lambda at t| over an even grid
/// on [0, horizon]; one-sided near t = 0.
double validate_lambda_derivative(const FrictionSchedule& s, double horizon,
                                  std::size_t grid_points, double h = 1e-5);

const std::vector<CatalogueEntry>& schedule_catalogue();

FrictionSchedule make_schedule(const std::string& name, const ParamMap& params = {});

}  // namespace hbft
