#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbft {

CheckRecord make_record(std::string name, double residual, double threshold,
                        std::string details) {
  CheckRecord r;
  r.name = std::move(name);
  r.residual = residual;
  r.threshold = threshold;
  r.pass = residual <= threshold;  // false for NaN
  r.details = std::move(details);
  return r;
}

bool CertificationReport::all_pass() const {
  if (refused) return false;
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

void SampledFunction::validate() const {
  if (t.size() != value.size())
    throw InputError("sampled function: time and value series differ in length");
  if (!derivative.empty() && derivative.size() != t.size())
    throw InputError("sampled function: derivative series has wrong length");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw InputError("sampled function: times must increase strictly");
}

std::vector<double> finite_difference_derivative(const std::vector<double>& t,
                                                 const std::vector<double>& f) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (f[1] - f[0]) / (t[1] - t[0]);
    return d;
  }
  {
    const double h0 = t[1] - t[0], h1 = t[2] - t[1];
    d.front() = -(2 * h0 + h1) / (h0 * (h0 + h1)) * f[0] + (h0 + h1) / (h0 * h1) * f[1] -
                h0 / (h1 * (h0 + h1)) * f[2];
  }
  {
    const double h0 = t[n - 2] - t[n - 3], h1 = t[n - 1] - t[n - 2];
    d.back() = h1 / (h0 * (h0 + h1)) * f[n - 3] - (h0 + h1) / (h0 * h1) * f[n - 2] +
               (2 * h1 + h0) / (h1 * (h0 + h1)) * f[n - 1];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
    d[i] = (-h1 / (h0 * (h0 + h1))) * f[i - 1] + ((h1 - h0) / (h0 * h1)) * f[i] +
           (h0 / (h1 * (h0 + h1))) * f[i + 1];
  }
  return d;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return acc;
}

namespace {

std::size_t tail_start_index(std::size_t n, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
    throw InputError("tail_fraction must lie in (0, 1)");
  if (n == 0) throw InputError("tail window is empty: trajectory has no samples");
  const auto start =
      static_cast<std::size_t>(std::floor((1.0 - tail_fraction) * static_cast<double>(n)));
  return std::min(start, n - 1);
}

std::vector<double> times(const Trajectory& traj) {
  std::vector<double> t;
  t.reserve(traj.samples.size());
  for (const auto& s : traj.samples) t.push_back(s.t);
  return t;
}

}  // namespace

namespace {

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Descriptive fits of E(t) - E(T) on [T/10, T/2]: C t^-p and C e^-rt.
// Reported as metrics only; no rate is asserted.
void fit_energy_decay(const Trajectory& traj, CheckRecord& r) {
  const double t_end = traj.t_final();
  const double e_ref = traj.samples.back().energy;
  std::vector<double> log_t, t, log_e;
  for (const auto& s : traj.samples) {
    if (s.t < 0.1 * t_end || s.t > 0.5 * t_end || !(s.energy > e_ref)) continue;
    log_t.push_back(std::log(s.t));
    t.push_back(s.t);
    log_e.push_back(std::log(s.energy - e_ref));
  }
  if (log_e.size() < 3) return;
  r.metrics["decay_power_fit"] = -slope(log_t, log_e);
  r.metrics["decay_exp_fit"] = -slope(t, log_e);
}

}  // namespace

CheckRecord check_energy_monotone(const Trajectory& traj, double tol) {
  if (traj.samples.empty()) throw InputError("check_energy_monotone: empty trajectory");
  double worst = 0.0;
  double worst_t = 0.0;
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const double rise = traj.samples[k].energy - traj.samples[k - 1].energy;
    if (!(rise <= worst)) {
      worst = rise;
      worst_t = traj.samples[k].t;
    }
  }
  auto r = make_record("energy_monotone", worst, tol,
                       "max energy increase between consecutive samples");
  r.metrics["worst_t"] = worst_t;
  fit_energy_decay(traj, r);
  return r;
}

CheckRecord energy_balance_residual(const Trajectory& traj, const FrictionSchedule&,
                                    double threshold) {
  if (traj.samples.size() < 2)
    throw InputError("energy_balance_residual: need at least two samples");
  std::vector<double> rate;
  rate.reserve(traj.samples.size());
  for (const auto& s : traj.samples) rate.push_back(-s.dissipation);
  const double q = trapezoid(times(traj), rate);
  const double e0 = traj.samples.front().energy;
  const double et = traj.samples.back().energy;
  auto r = make_record("energy_balance", std::abs(e0 - et - q) / std::max(1.0, std::abs(e0)),
                       threshold, "|E(0) - E(T) - int lambda|v|^2| / max(1, |E(0)|)");
  r.partial_certificate = true;
  r.metrics["E0"] = e0;
  r.metrics["ET"] = et;
  r.metrics["dissipated"] = q;
  r.metrics["T"] = traj.t_final();
  return r;
}

CheckRecord check_velocity_bound(const Trajectory& traj, const Potential& p, double tol) {
  if (traj.samples.empty()) throw InputError("check_velocity_bound: empty trajectory");
  if (!p.lower_bound()) {
    auto r = make_record("velocity_bound", std::numeric_limits<double>::quiet_NaN(), tol,
                         "potential has no known lower bound");
    r.flags.push_back("no_lower_bound");
    return r;
  }
  const auto& s0 = traj.samples.front();
  const double bound = 0.5 * dot(s0.v, s0.v) + p.value(s0.x) - *p.lower_bound();
  double excess = 0.0;
  double sup_kinetic = 0.0;
  for (const auto& s : traj.samples) {
    const double kinetic = 0.5 * dot(s.v, s.v);
    sup_kinetic = std::max(sup_kinetic, kinetic);
    excess = std::max(excess, kinetic - bound);
  }
  auto r = make_record("velocity_bound", excess, tol,
                       "max over samples of 1/2|v|^2 - (1/2|v0|^2 + Phi(x0) - inf Phi)");
  r.partial_certificate = true;
  r.metrics["bound"] = bound;
  r.metrics["sup_kinetic"] = sup_kinetic;
  return r;
}

TailAsymptotics tail_asymptotics(const Trajectory& traj, const FrictionSchedule& s,
                                 const Potential& p, double tail_fraction) {
  TailAsymptotics out;
  out.tail_start = tail_start_index(traj.samples.size(), tail_fraction);
  if (p.dim() != traj.dim) throw InputError("tail_asymptotics: potential dimension mismatch");
  std::vector<double> rate;
  rate.reserve(traj.samples.size());
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& smp = traj.samples[k];
    const double speed = norm(smp.v);
    out.sup_v = std::max(out.sup_v, speed);
    out.sup_x = std::max(out.sup_x, norm(smp.x));
    rate.push_back(smp.lambda * speed * speed);
    if (k >= out.tail_start) {
      out.tail_sup_sqrt_lambda_v =
          std::max(out.tail_sup_sqrt_lambda_v, std::sqrt(std::max(0.0, smp.lambda)) * speed);
      out.tail_sup_grad = std::max(out.tail_sup_grad, smp.grad_norm);
    }
  }
  out.dissipation_integral = trapezoid(times(traj), rate);
  out.premise_unverified = !s.has_derivative();
  return out;
}

CheckRecord tail_asymptotics_check(const Trajectory& traj, const FrictionSchedule& s,
                                   const Potential& p, double threshold, double tail_fraction) {
  const TailAsymptotics ta = tail_asymptotics(traj, s, p, tail_fraction);
  auto r = make_record("tail_asymptotics", ta.tail_sup_sqrt_lambda_v, threshold,
                       "tail sup of sqrt(lambda)|v|");
  r.partial_certificate = true;
  r.metrics["tail_fraction"] = tail_fraction;
  r.metrics["tail_start_t"] = traj.samples[ta.tail_start].t;
  r.metrics["tail_sup_grad"] = ta.tail_sup_grad;
  r.metrics["sup_v"] = ta.sup_v;
  r.metrics["sup_x"] = ta.sup_x;
  r.metrics["dissipation_integral"] = ta.dissipation_integral;
  if (ta.premise_unverified) r.flags.push_back("premise_unverified");
  return r;
}

const char* to_string(PremiseStatus s) {
  switch (s) {
    case PremiseStatus::holds: return "holds";
    case PremiseStatus::violated: return "violated";
    case PremiseStatus::not_established: return "not_established";
  }
  return "?";
}

namespace {

double ratio(double value, double budget) {
  if (budget > 0.0) return value / budget;
  return value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

BarbalatResult barbalat_check(const SampledFunction& f, const BarbalatBudgets& budgets) {
  f.validate();
  if (f.t.size() < 2) throw InputError("barbalat_check: need at least two samples");
  if (!(budgets.l2 > 0.0) || !(budgets.linf > 0.0) || !(budgets.derivative > 0.0) ||
      !(budgets.tail_threshold > 0.0))
    throw InputError("barbalat_check: budgets must be > 0");
  const std::size_t n = f.t.size();
  const std::size_t start = tail_start_index(n, budgets.tail_fraction);

  BarbalatResult r;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq[i] = f.value[i] * f.value[i];
    r.sup_abs = std::max(r.sup_abs, std::abs(f.value[i]));
    if (i >= start) r.tail_sup_abs = std::max(r.tail_sup_abs, std::abs(f.value[i]));
  }
  r.l2_integral = trapezoid(f.t, sq);
  const std::vector<double> tail_t(f.t.begin() + static_cast<std::ptrdiff_t>(start), f.t.end());
  const std::vector<double> tail_sq(sq.begin() + static_cast<std::ptrdiff_t>(start), sq.end());
  r.l2_tail_share = r.l2_integral > 0.0 ? trapezoid(tail_t, tail_sq) / r.l2_integral : 0.0;

  const std::vector<double> deriv =
      f.derivative.empty() ? finite_difference_derivative(f.t, f.value) : f.derivative;
  for (double d : deriv) r.sup_abs_derivative = std::max(r.sup_abs_derivative, std::abs(d));

  // A partial integral that keeps growing at a linear or faster rate collects
  // at least the tail's share of the time span; half of that marks the trend.
  const double time_share = (f.t.back() - f.t[start]) / (f.t.back() - f.t.front());
  r.l2_growth_limit = 0.5 * time_share;

  if (r.l2_integral > budgets.l2)
    r.l2 = PremiseStatus::violated;
  else if (r.l2_tail_share > r.l2_growth_limit)
    r.l2 = PremiseStatus::not_established;
  else
    r.l2 = PremiseStatus::holds;
  r.linf = r.sup_abs <= budgets.linf ? PremiseStatus::holds : PremiseStatus::violated;
  r.derivative = r.sup_abs_derivative <= budgets.derivative ? PremiseStatus::holds
                                                            : PremiseStatus::violated;
  r.conclusion = r.tail_sup_abs <= budgets.tail_threshold;
  return r;
}

CheckRecord BarbalatResult::record(const BarbalatBudgets& budgets) const {
  const double residual =
      std::max({ratio(l2_integral, budgets.l2), ratio(l2_tail_share, l2_growth_limit),
                ratio(sup_abs, budgets.linf), ratio(sup_abs_derivative, budgets.derivative),
                ratio(tail_sup_abs, budgets.tail_threshold)});
  auto r = make_record("barbalat", residual, 1.0,
                       std::string("L2 ") + to_string(l2) + ", Linf " + to_string(linf) +
                           ", derivative " + to_string(derivative) + ", conclusion " +
                           (conclusion ? "holds" : "fails"));
  r.partial_certificate = true;
  r.metrics["l2_integral"] = l2_integral;
  r.metrics["l2_tail_share"] = l2_tail_share;
  r.metrics["l2_growth_limit"] = l2_growth_limit;
  r.metrics["sup_abs"] = sup_abs;
  r.metrics["sup_abs_derivative"] = sup_abs_derivative;
  r.metrics["tail_sup_abs"] = tail_sup_abs;
  r.flags.push_back(std::string("l2:") + to_string(l2));
  r.flags.push_back(std::string("linf:") + to_string(linf));
  r.flags.push_back(std::string("derivative:") + to_string(derivative));
  r.flags.push_back(std::string("conclusion:") + (conclusion ? "holds" : "fails"));
  return r;
}

SampledFunction sqrt_lambda_speed(const Trajectory& traj) {
  SampledFunction f;
  for (const auto& s : traj.samples) {
    if (!f.t.empty() && !(s.t > f.t.back())) continue;
    f.t.push_back(s.t);
    f.value.push_back(std::sqrt(std::max(0.0, s.lambda)) * norm(s.v));
  }
  return f;
}

CheckRecord check_acceleration_bound(const Trajectory& traj, const Potential& p,
                                     const FrictionSchedule& s, double bound) {
  if (traj.samples.empty()) throw InputError("check_acceleration_bound: empty trajectory");
  double sup_acc = 0.0, sup_lambda = 0.0, sup_v = 0.0, sup_grad = 0.0;
  Vec g(p.dim()), acc(p.dim());
  for (const auto& smp : traj.samples) {
    const double lam = s.lambda_at(smp.t);
    p.gradient_into(smp.x, g);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = -lam * smp.v[i] - g[i];
    const double a = norm(acc);
    sup_acc = std::isnan(a) ? a : std::max(sup_acc, a);
    sup_lambda = std::max(sup_lambda, lam);
    sup_v = std::max(sup_v, norm(smp.v));
    sup_grad = std::max(sup_grad, norm(g));
  }
  auto r = make_record("acceleration_bound", sup_acc, bound,
                       "sup |x''| with x'' = -lambda v - grad Phi(x)");
  r.partial_certificate = true;
  r.metrics["triangle_bound"] = sup_lambda * sup_v + sup_grad;
  return r;
}

namespace {

Vec interpolate_position(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const Sample& a, double tt) { return a.t < tt; });
  if (it == s.begin()) return it->x;
  if (it == s.end()) return s.back().x;
  const Sample& hi = *it;
  const Sample& lo = *(it - 1);
  if (hi.t == t) return hi.x;
  const double w = (t - lo.t) / (hi.t - lo.t);
  Vec out(lo.x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * lo.x[i] + w * hi.x[i];
  return out;
}

}  // namespace

CheckRecord model_discrepancy(const Trajectory& traj_full, const Trajectory& traj_hbft,
                              double threshold) {
  if (traj_full.samples.empty() || traj_hbft.samples.empty())
    throw InputError("model_discrepancy: empty trajectory");
  if (traj_full.dim != traj_hbft.dim)
    throw InputError("model_discrepancy: trajectories differ in dimension");
  const double lo = std::max(traj_full.samples.front().t, traj_hbft.samples.front().t);
  const double hi = std::min(traj_full.t_final(), traj_hbft.t_final());
  if (lo > hi) throw InputError("model_discrepancy: time spans do not overlap");

  const bool full_finer = traj_full.samples.size() >= traj_hbft.samples.size();
  const Trajectory& fine = full_finer ? traj_full : traj_hbft;
  const Trajectory& coarse = full_finer ? traj_hbft : traj_full;
  double sup = 0.0;
  Vec diff(fine.dim);
  for (const auto& smp : fine.samples) {
    if (smp.t < lo || smp.t > hi) continue;
    const Vec other = interpolate_position(coarse, smp.t);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = smp.x[i] - other[i];
    sup = std::max(sup, norm(diff));
  }
  auto r = make_record("model_discrepancy", sup, threshold,
                       "sup |x_full - x_hbft| over the common time span");
  r.metrics["t_common"] = hi;
  return r;
}

CheckRecord check_critical_point(const Trajectory& traj, const Potential& p,
                                 double distance_threshold, double grad_threshold,
                                 double tail_fraction) {
  const std::size_t start = tail_start_index(traj.samples.size(), tail_fraction);
  double tail_grad = 0.0;
  for (std::size_t k = start; k < traj.samples.size(); ++k)
    tail_grad = std::max(tail_grad, traj.samples[k].grad_norm);

  const Vec& x_final = traj.samples.back().x;
  double distance = std::numeric_limits<double>::infinity();
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < p.critical_points().size(); ++i) {
    Vec diff(x_final);
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= p.critical_points()[i][j];
    const double d = norm(diff);
    if (d < distance) {
      distance = d;
      nearest = i;
    }
  }
  // Without catalogued critical points only the gradient residual counts.
  const double dist_ratio =
      p.critical_points().empty() ? 0.0 : distance / distance_threshold;
  auto r = make_record("critical_point",
                       std::max(dist_ratio, tail_grad / grad_threshold), 1.0,
                       "max(distance to nearest critical point / threshold, tail sup "
                       "|grad Phi| / grad_threshold)");
  r.metrics["distance"] = distance;
  r.metrics["tail_sup_grad"] = tail_grad;
  r.metrics["final_grad_norm"] = traj.samples.back().grad_norm;
  if (!p.critical_points().empty()) {
    for (std::size_t j = 0; j < p.critical_points()[nearest].size(); ++j)
      r.metrics["nearest_" + std::to_string(j)] = p.critical_points()[nearest][j];
  } else {
    r.flags.push_back("no_known_critical_points");
  }
  return r;
}

}  // namespace hbft
