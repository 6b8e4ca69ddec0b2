#include "core/output.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace hbft {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

nlohmann::json params_json(const ParamMap& params) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [k, v] : params.entries()) {
    if (v.size() == 1)
      out[k] = v.front();
    else
      out[k] = v;
  }
  return out;
}

// JSON has no NaN/inf; write them as strings so the report stays readable.
nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "t";
  for (std::size_t i = 0; i < traj.dim; ++i) out << ",x_" << i;
  for (std::size_t i = 0; i < traj.dim; ++i) out << ",v_" << i;
  out << ",E,lambda,grad_norm,dissipation\n";
  std::string line;
  for (const auto& s : traj.samples) {
    line = num(s.t);
    for (double x : s.x) line += "," + num(x);
    for (double v : s.v) line += "," + num(v);
    line += "," + num(s.energy) + "," + num(s.lambda) + "," + num(s.grad_norm) + "," +
            num(s.dissipation) + "\n";
    out << line;
  }
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_trajectory_csv(traj, out);
  if (!out) throw IoError("write failed for " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string report_json(const ScenarioConfig& cfg, const ScenarioOutcome& outcome) {
  using nlohmann::json;
  const Trajectory& traj = outcome.trajectory;
  json j;
  j["scenario"] = cfg.name;
  j["source"] = cfg.source;
  j["model"] = to_string(cfg.model);
  j["potential"] = {{"name", cfg.potential.name}, {"params", params_json(cfg.potential.params)}};
  j["schedule"] = {{"name", cfg.schedule.name}, {"params", params_json(cfg.schedule.params)}};
  j["initial"] = {{"x", cfg.x0}, {"v", cfg.v0}};
  if (cfg.mechanical)
    j["mechanical"] = {{"mass", cfg.mechanical->mass}, {"gravity", cfg.mechanical->gravity}};

  json t;
  t["csv"] = outcome.csv_path.filename().string();
  t["samples"] = traj.samples.size();
  t["t_final"] = traj.t_final();
  t["termination"] = to_string(traj.termination);
  if (!traj.samples.empty()) t["final_energy"] = number_json(traj.samples.back().energy);
  t["method"] = to_string(cfg.integrator.method);
  t["step_stats"] = {{"accepted", traj.stats.accepted},
                     {"rejected", traj.stats.rejected},
                     {"min_step", number_json(traj.stats.accepted ? traj.stats.min_step : 0.0)},
                     {"max_step", traj.stats.max_step}};
  t["contact_loss_steps"] = traj.contact_loss_steps;
  if (traj.first_contact_loss_t) t["first_contact_loss_t"] = *traj.first_contact_loss_t;
  j["trajectory"] = t;

  json cert;
  cert["refused"] = outcome.report.refused;
  if (outcome.report.refused) cert["refusal_reason"] = outcome.report.refusal_reason;
  cert["all_pass"] = outcome.error.empty() && outcome.report.all_pass();
  json checks = json::array();
  for (const auto& c : outcome.report.checks) {
    json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["residual"] = number_json(c.residual);
    jc["threshold"] = number_json(c.threshold);
    jc["details"] = c.details;
    jc["partial_certificate"] = c.partial_certificate;
    if (c.partial_certificate) jc["horizon"] = traj.t_final();
    json metrics = json::object();
    for (const auto& [k, v] : c.metrics) metrics[k] = number_json(v);
    jc["metrics"] = metrics;
    jc["flags"] = c.flags;
    checks.push_back(jc);
  }
  cert["checks"] = checks;
  j["certification"] = cert;
  if (!outcome.error.empty()) j["error"] = outcome.error;
  j["exit_code"] = static_cast<int>(outcome.exit);
  return j.dump(2) + "\n";
}

std::string render_summary(const ScenarioConfig& cfg, const ScenarioOutcome& outcome) {
  const Trajectory& traj = outcome.trajectory;
  std::ostringstream os;
  os << "scenario     " << cfg.name << " (" << to_string(cfg.model) << ", "
     << cfg.potential.name << " / " << cfg.schedule.name << ")\n";
  os << "termination  " << to_string(traj.termination) << " at t=" << short_num(traj.t_final())
     << " after " << traj.stats.accepted << " steps (" << traj.stats.rejected
     << " rejected), " << traj.samples.size() << " samples\n";
  if (!traj.samples.empty()) {
    os << "energy       E(0)=" << short_num(traj.samples.front().energy)
       << "  E(T)=" << short_num(traj.samples.back().energy) << "\n";
    double tail_sl = 0.0, tail_g = 0.0;
    const auto start = static_cast<std::size_t>(
        std::floor((1.0 - kDefaultTailFraction) * static_cast<double>(traj.samples.size())));
    for (std::size_t k = std::min(start, traj.samples.size() - 1); k < traj.samples.size(); ++k) {
      const auto& s = traj.samples[k];
      tail_sl = std::max(tail_sl, std::sqrt(std::max(0.0, s.lambda)) * norm(s.v));
      tail_g = std::max(tail_g, s.grad_norm);
    }
    os << "tail sups    sqrt(lambda)|v|=" << short_num(tail_sl)
       << "  |grad Phi|=" << short_num(tail_g) << "  (last "
       << static_cast<int>(kDefaultTailFraction * 100) << "% of samples)\n";
  }
  if (traj.contact_loss_steps > 0)
    os << "warning      reaction force <= 0 on " << traj.contact_loss_steps
       << " steps (contact assumption violated)\n";
  if (!outcome.error.empty()) os << "error        " << outcome.error << "\n";
  if (outcome.report.refused) os << "checks       " << outcome.report.refusal_reason << "\n";
  for (const auto& c : outcome.report.checks) {
    os << (c.pass ? "  PASS  " : "  FAIL  ") << c.name << "  residual=" << short_num(c.residual)
       << "  threshold=" << short_num(c.threshold);
    if (c.partial_certificate) os << "  [partial: t<=" << short_num(traj.t_final()) << "]";
    for (const auto& f : c.flags)
      if (f == "premise_unverified" || f == "no_lower_bound") os << "  [" << f << "]";
    os << "\n";
  }
  os << "result       "
     << (outcome.exit == ExitCode::pass
             ? "PASS"
             : outcome.exit == ExitCode::integration_error ? "INTEGRATION ERROR" : "FAIL")
     << "\n";
  return os.str();
}

}  // namespace hbft
