#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/integrate.hpp"

namespace hbft {

/// One certificate. Invariant: pass == (residual <= threshold).
struct CheckRecord {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double threshold = 0.0;
  std::string details;
  // Statement is about [0, inf) but was only checked on [0, t_final].
  bool partial_certificate = false;
  std::map<std::string, double> metrics;
  std::vector<std::string> flags;
};

/// Builds a record with pass derived from residual and threshold. A NaN
/// residual never passes.
CheckRecord make_record(std::string name, double residual, double threshold,
                        std::string details = {});

struct CertificationReport {
  std::vector<CheckRecord> checks;
  bool refused = false;          // potential is unbounded below
  std::string refusal_reason;

  bool all_pass() const;
};

/// Scalar time series with optional derivative samples on the same grid.
struct SampledFunction {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> derivative;  // empty: use finite differences

  void validate() const;
};

/// Three-point derivative on a non-uniform grid (one-sided at the ends).
std::vector<double> finite_difference_derivative(const std::vector<double>& t,
                                                 const std::vector<double>& f);

/// Trapezoid rule on a non-uniform grid.
double trapezoid(const std::vector<double>& t, const std::vector<double>& f);

inline constexpr double kDefaultTailFraction = 0.2;
inline constexpr double kDefaultEnergyBalanceThreshold = 1e-5;

CheckRecord check_energy_monotone(const Trajectory& traj, double tol);

/// |E(0) - E(T) - int lambda |v|^2| / max(1, |E(0)|), trapezoid on the samples.
CheckRecord energy_balance_residual(const Trajectory& traj, const FrictionSchedule& s,
                                    double threshold = kDefaultEnergyBalanceThreshold);

/// 1/2|v|^2 <= 1/2|v0|^2 + Phi(x0) - inf Phi at every sample. Needs a
/// known lower bound; otherwise the record fails with flag no_lower_bound.
CheckRecord check_velocity_bound(const Trajectory& traj, const Potential& p, double tol);

struct TailAsymptotics {
  std::size_t tail_start = 0;   // index of first tail sample
  double tail_sup_sqrt_lambda_v = 0.0;
  double tail_sup_grad = 0.0;
  double sup_v = 0.0;           // whole trajectory
  double sup_x = 0.0;
  double dissipation_integral = 0.0;  // int_0^T lambda |v|^2
  bool premise_unverified = false;    // schedule has no derivative
};

TailAsymptotics tail_asymptotics(const Trajectory& traj, const FrictionSchedule& s,
                                 const Potential& p,
                                 double tail_fraction = kDefaultTailFraction);

/// Record form: passes when the tail sup of sqrt(lambda)|v| is below threshold.
CheckRecord tail_asymptotics_check(const Trajectory& traj, const FrictionSchedule& s,
                                   const Potential& p, double threshold,
                                   double tail_fraction = kDefaultTailFraction);

enum class PremiseStatus { holds, violated, not_established };

const char* to_string(PremiseStatus s);

struct BarbalatBudgets {
  double l2 = 1.0;
  double linf = 1.0;
  double derivative = 1.0;
  double tail_threshold = 1e-6;   // conclusion: tail sup |f| below this
  double tail_fraction = kDefaultTailFraction;
};

/// Premises (f in L2 and Linf, f' in Linf) and conclusion (f -> 0) of the
/// Barbalat-type lemma, each judged on the samples independently.
struct BarbalatResult {
  PremiseStatus l2 = PremiseStatus::not_established;
  PremiseStatus linf = PremiseStatus::not_established;
  PremiseStatus derivative = PremiseStatus::not_established;
  bool conclusion = false;

  double l2_integral = 0.0;
  double l2_tail_share = 0.0;  // share of int f^2 collected in the tail window
  double l2_growth_limit = 0.0;  // tail share above this reads as unbounded growth
  double sup_abs = 0.0;
  double sup_abs_derivative = 0.0;
  double tail_sup_abs = 0.0;

  bool premises_hold() const {
    return l2 == PremiseStatus::holds && linf == PremiseStatus::holds &&
           derivative == PremiseStatus::holds;
  }

  /// Residual is the largest budget-normalized quantity, threshold 1.
  CheckRecord record(const BarbalatBudgets& budgets) const;
};

BarbalatResult barbalat_check(const SampledFunction& f, const BarbalatBudgets& budgets);

/// f(t) = sqrt(lambda(t)) |v(t)| along a trajectory.
SampledFunction sqrt_lambda_speed(const Trajectory& traj);

/// sup |x''| with x'' = -lambda v - grad Phi(x) reconstructed per sample.
CheckRecord check_acceleration_bound(const Trajectory& traj, const Potential& p,
                                     const FrictionSchedule& s, double bound);

/// sup |x_full - x_hbft| on the finer grid, coarser trajectory linearly
/// interpolated. Throws InputError when the time spans do not overlap.
CheckRecord model_discrepancy(const Trajectory& traj_full, const Trajectory& traj_hbft,
                              double threshold);

/// Distance from the final position to the nearest known critical point,
/// plus the tail sup of |grad Phi|. Passes when both are below threshold
/// and grad_threshold respectively.
CheckRecord check_critical_point(const Trajectory& traj, const Potential& p,
                                 double distance_threshold, double grad_threshold,
                                 double tail_fraction = kDefaultTailFraction);

}  // namespace hbft
