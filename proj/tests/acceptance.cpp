// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/dynamics.hpp"
#include "core/friction.hpp"
#include "core/integrate.hpp"
#include "core/potentials.hpp"
#include "core/scenario.hpp"
#include "support.hpp"

using namespace hbft;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("%s  [%2d] %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Runs `body`, turning an escaped exception into a FAIL line.
void criterion(int id, const std::string& title, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

std::vector<fs::path> bundled_scenarios() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(HBFT_SCENARIO_DIR))
    if (e.path().extension() == ".cfg") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct Run {
  ScenarioConfig cfg;
  ScenarioOutcome outcome;
};

std::vector<Run> run_all(const fs::path& out_dir) {
  std::vector<Run> runs;
  for (const auto& path : bundled_scenarios()) {
    Run r{load_scenario(path), {}};
    r.outcome = run_scenario(r.cfg, out_dir);
    runs.push_back(std::move(r));
  }
  return runs;
}

const CheckRecord* find_check(const CertificationReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return &c;
  return nullptr;
}

Trajectory run(const Potential& p, const FrictionSchedule& s, Vec x0, Vec v0,
               const IntegratorConfig& cfg) {
  return integrate(make_hbft_field(p, s), p, s, {0.0, std::move(x0), std::move(v0)}, cfg);
}

double oracle_error(const Trajectory& traj) {
  double err = 0.0;
  for (const auto& smp : traj.samples)
    err = std::max(err, std::abs(smp.x[0] - test::DampedHarmonic::x(smp.t)));
  return err;
}

SampledFunction sample(double (*f)(double), double t_max, double dt) {
  SampledFunction out;
  const auto n = static_cast<std::size_t>(std::llround(t_max / dt));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt;
    out.t.push_back(t);
    out.value.push_back(f(t));
  }
  return out;
}

}  // namespace

int main() {
  const Potential quad = make_potential("quadratic", test::params({{"dim", 1}}));
  const FrictionSchedule one = make_schedule("constant", test::params({{"lambda0", 1}}));

  criterion(1, "closed-form oracle, RK4 h=1e-3 on [0,10]", [&] {
    const auto start = std::chrono::steady_clock::now();
    const auto traj = run(quad, one, {1.0}, {0.0}, test::rk4(1e-3, 10.0));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double err = oracle_error(traj);
    report(1, "closed-form oracle, RK4 h=1e-3 on [0,10]", err <= 1e-6 && secs < 1.0,
           fmt("max|x-x_exact| = %.3g (<= 1e-6), runtime %.3g s (< 1 s)", err, secs));
  });

  const fs::path out_a = test::scratch_dir("acceptance_a");
  const fs::path out_b = test::scratch_dir("acceptance_b");
  std::vector<Run> runs;
  try {
    runs = run_all(out_a);
  } catch (const std::exception& e) {
    std::printf("bundled scenarios failed to run: %s\n", e.what());
  }

  // The energy identities hold for the reduced model only; full-surface
  // scenarios are covered by criterion 8.
  auto hbft_runs = [&] {
    std::vector<const Run*> out;
    for (const auto& r : runs)
      if (r.cfg.model == ModelKind::hbft) out.push_back(&r);
    return out;
  };

  criterion(2, "energy never increases between samples", [&] {
    double worst = 0.0;
    std::string where = "-";
    for (const Run* r : hbft_runs()) {
      const auto rec = check_energy_monotone(r->outcome.trajectory, 1e-8);
      if (rec.residual >= worst) worst = rec.residual, where = r->cfg.name;
    }
    report(2, "energy never increases between samples", !runs.empty() && worst <= 1e-8,
           fmt("max increase %.3g (<= 1e-8) over %.0f scenarios", worst,
               static_cast<double>(hbft_runs().size())) + ", worst " + where);
  });

  criterion(3, "energy balance", [&] {
    double worst = 0.0;
    std::string where = "-";
    for (const Run* r : hbft_runs()) {
      const auto rs = resolve_scenario(r->cfg);
      const auto rec = energy_balance_residual(r->outcome.trajectory, rs.schedule);
      if (rec.residual >= worst) worst = rec.residual, where = r->cfg.name;
    }
    report(3, "energy balance", !runs.empty() && worst <= 1e-5,
           fmt("max relative residual %.3g (<= 1e-5) over %.0f scenarios", worst,
               static_cast<double>(hbft_runs().size())) + ", worst " + where);
  });

  criterion(4, "velocity bound from the energy", [&] {
    double worst = 0.0;
    int counted = 0;
    for (const Run* r : hbft_runs()) {
      const auto rs = resolve_scenario(r->cfg);
      if (!rs.potential.lower_bound()) continue;
      ++counted;
      worst = std::max(worst, check_velocity_bound(r->outcome.trajectory, rs.potential, 1e-8)
                                  .residual);
    }
    report(4, "velocity bound from the energy", counted > 0 && worst <= 1e-8,
           fmt("max excess %.3g (<= 1e-8) over %.0f scenarios with a lower bound", worst,
               counted));
  });

  criterion(5, "tail of sqrt(lambda)|v| at T=50", [&] {
    IntegratorConfig cfg;
    cfg.t_max = 50.0;
    cfg.stop.dwell = 1e3;
    const FrictionSchedule osc =
        make_schedule("oscillating", test::params({{"a", 2}, {"b", 1}, {"omega", 1}}));
    const double constant =
        tail_asymptotics(run(quad, one, {1.0}, {0.0}, cfg), one, quad).tail_sup_sqrt_lambda_v;
    const double oscill =
        tail_asymptotics(run(quad, osc, {1.0}, {0.0}, cfg), osc, quad).tail_sup_sqrt_lambda_v;
    report(5, "tail of sqrt(lambda)|v| at T=50", constant <= 1e-5 && oscill <= 1e-5,
           fmt("lambda=1: %.3g, lambda=2+sin t: %.3g (<= 1e-5)", constant, oscill));
  });

  criterion(6, "Barbalat harness classifications", [&] {
    const BarbalatBudgets budgets{10.0, 10.0, 1.5, 1e-6};
    const auto decay = barbalat_check(sample([](double t) { return std::exp(-t); }, 50, 1e-3),
                                      budgets);
    const auto flat = barbalat_check(sample([](double) { return 1.0; }, 50, 1e-2), budgets);
    const auto chirp = barbalat_check(
        sample([](double t) { return std::sin(t * t) / (1.0 + t); }, 50, 1e-3), budgets);
    const bool ok = decay.premises_hold() && decay.conclusion &&
                    flat.l2 == PremiseStatus::violated && flat.linf == PremiseStatus::holds &&
                    flat.derivative == PremiseStatus::holds &&
                    chirp.l2 == PremiseStatus::holds && chirp.linf == PremiseStatus::holds &&
                    chirp.derivative == PremiseStatus::violated;
    report(6, "Barbalat harness classifications", ok,
           std::string("e^-t: l2 ") + to_string(decay.l2) + ", linf " + to_string(decay.linf) +
               ", deriv " + to_string(decay.derivative) +
               ", conclusion " + (decay.conclusion ? "yes" : "no") + "; 1: l2 " +
               to_string(flat.l2) + "; chirp: deriv " + to_string(chirp.derivative) +
               ", l2 " + to_string(chirp.l2));
  });

  criterion(7, "RK4 convergence order", [&] {
    const double e1 = oracle_error(run(quad, one, {1.0}, {0.0}, test::rk4(0.1, 10.0)));
    const double e2 = oracle_error(run(quad, one, {1.0}, {0.0}, test::rk4(0.05, 10.0)));
    const double ratio = e1 / e2;
    report(7, "RK4 convergence order", ratio >= 8.0 && ratio <= 32.0,
           fmt("error %.3g at h=0.1, %.3g at h=0.05, ratio %.3g in [8, 32]", e1, e2, ratio));
  });

  criterion(8, "surface vs reduced model as the slope shrinks", [&] {
    std::vector<double> d;
    for (const char* eps : {"1e-1", "1e-2", "1e-3"})
      for (const auto& r : runs)
        if (r.cfg.name == std::string("surface_eps_") + eps)
          if (const auto* c = find_check(r.outcome.report, "model_discrepancy"))
            d.push_back(c->residual);
    const bool ok = d.size() == 3 && d[0] > d[1] && d[1] > d[2];
    report(8, "surface vs reduced model as the slope shrinks", ok,
           d.size() == 3
               ? fmt("sup|x_full-x_reduced| = %.3g, %.3g, %.3g for eps 1e-1, 1e-2, 1e-3", d[0],
                     d[1], d[2])
               : std::string("surface_eps scenarios missing"));
  });

  criterion(9, "double well converges to a critical point", [&] {
    const Run* dw = nullptr;
    for (const auto& r : runs)
      if (r.cfg.name == "double_well") dw = &r;
    if (!dw) return report(9, "double well converges to a critical point", false, "missing");
    const auto& traj = dw->outcome.trajectory;
    const auto rs = resolve_scenario(dw->cfg);
    const auto rec = check_critical_point(traj, rs.potential, 1e-3, 1e-4);
    const double dist = rec.metrics.at("distance");
    const double grad = rec.metrics.at("tail_sup_grad");
    const bool stationary = traj.termination == Termination::stationary;
    report(9, "double well converges to a critical point",
           stationary && dist <= 1e-3 && grad <= 1e-4,
           std::string("termination ") + to_string(traj.termination) +
               fmt(", x_final %.9g, distance %.3g (<= 1e-3), tail |grad| %.3g (<= 1e-4)",
                   traj.samples.back().x[0], dist, grad));
  });

  criterion(10, "gradient validation at 100 random points", [&] {
    double worst = 0.0;
    std::string where = "-";
    for (const auto& entry : potential_catalogue()) {
      ParamMap params;
      if (entry.name == "anisotropic_quadratic") params.set("diag", {1.0, 4.0, 0.25});
      const Potential p = make_potential(entry.name, params);
      for (const auto& x : test::random_points(p.dim(), 100, 2.0, 2024)) {
        const double r = validate_gradient(p, x);
        if (r >= worst) worst = r, where = entry.name;
      }
    }
    report(10, "gradient validation at 100 random points", worst <= 1e-4,
           fmt("max residual %.3g (<= 1e-4) over %.0f builtins", worst,
               static_cast<double>(potential_catalogue().size())) + ", worst " + where);
  });

  criterion(11, "byte-identical trajectories across runs", [&] {
    std::size_t same = 0;
    std::string differ;
    for (const auto& r : runs) {
      const auto again = run_scenario(r.cfg, out_b);
      if (test::slurp(r.outcome.csv_path) == test::slurp(again.csv_path) &&
          !test::slurp(again.csv_path).empty())
        ++same;
      else
        differ += " " + r.cfg.name;
    }
    report(11, "byte-identical trajectories across runs", !runs.empty() && same == runs.size(),
           fmt("%.0f of %.0f scenario CSVs identical", static_cast<double>(same),
               static_cast<double>(runs.size())) + (differ.empty() ? "" : "; differ:" + differ));
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
