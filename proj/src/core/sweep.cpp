#include "core/sweep.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "core/output.hpp"

namespace hbft {

namespace {

std::string at(const std::string& source, const YAML::Node& node) {
  return source + ":" + std::to_string(node.Mark().line + 1) + ": ";
}

double grid_number(const std::string& source, const std::string& key, const YAML::Node& node) {
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(at(source, node) + key + ": expected a number");
  }
}

void check_key(const std::string& source, const std::string& key, const YAML::Node& node) {
  const bool ok = key.rfind("potential.", 0) == 0 || key.rfind("schedule.", 0) == 0 ||
                  key == "integrator.t_max";
  if (!ok || key.back() == '.')
    throw ConfigError(at(source, node) + key +
                      ": sweep keys must be potential.<param>, schedule.<param> or "
                      "integrator.t_max");
}

void remember(std::vector<std::string>& keys, const std::string& key) {
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
}

}  // namespace

SweepGrid parse_sweep_grid(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": syntax error: " + e.msg);
  }
  SweepGrid grid;
  if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
  for (const auto& kv : root) {
    const auto k = kv.first.as<std::string>();
    if (k != "grid" && k != "points") throw ConfigError(at(source, kv.first) + k + ": unknown key");
  }

  if (const auto g = root["grid"]) {
    if (!g.IsMap()) throw ConfigError(at(source, g) + "grid: expected a mapping");
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    for (const auto& kv : g) {
      const auto key = kv.first.as<std::string>();
      check_key(source, key, kv.first);
      std::vector<double> values;
      if (kv.second.IsSequence()) {
        for (const auto& v : kv.second) values.push_back(grid_number(source, key, v));
      } else {
        values.push_back(grid_number(source, key, kv.second));
      }
      if (values.empty()) throw ConfigError(at(source, kv.second) + key + ": empty value list");
      axes.emplace_back(key, values);
      remember(grid.keys, key);
    }
    // Cartesian product, last axis fastest.
    std::vector<SweepPoint> points = {{}};
    for (const auto& [key, values] : axes) {
      std::vector<SweepPoint> next;
      for (const auto& p : points)
        for (double v : values) {
          SweepPoint q = p;
          q.emplace_back(key, v);
          next.push_back(std::move(q));
        }
      points = std::move(next);
    }
    if (!axes.empty()) grid.points = std::move(points);
  }

  if (const auto pts = root["points"]) {
    if (!pts.IsSequence()) throw ConfigError(at(source, pts) + "points: expected a list");
    for (const auto& item : pts) {
      if (!item.IsMap()) throw ConfigError(at(source, item) + "points: entries must be mappings");
      SweepPoint p;
      for (const auto& kv : item) {
        const auto key = kv.first.as<std::string>();
        check_key(source, key, kv.first);
        p.emplace_back(key, grid_number(source, key, kv.second));
        remember(grid.keys, key);
      }
      grid.points.push_back(std::move(p));
    }
  }
  if (grid.points.empty()) throw ConfigError(source + ": sweep grid has no points");
  return grid;
}

SweepGrid load_sweep_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open grid file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_grid(buf.str(), path.string());
}

ScenarioConfig apply_point(const ScenarioConfig& base, const SweepPoint& point,
                           std::size_t index) {
  ScenarioConfig cfg = base;
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "_%03zu", index);
  cfg.name = base.name + suffix;
  for (const auto& [key, value] : point) {
    if (key.rfind("potential.", 0) == 0)
      cfg.potential.params.set(key.substr(10), value);
    else if (key.rfind("schedule.", 0) == 0)
      cfg.schedule.params.set(key.substr(9), value);
    else if (key == "integrator.t_max")
      cfg.integrator.t_max = value;
  }
  // Per-point outputs always use the default names inside the point directory.
  cfg.outputs = {};
  return cfg;
}

SweepOutcome run_sweep(const ScenarioConfig& base, const SweepGrid& grid,
                       const std::filesystem::path& out_dir, unsigned workers) {
  if (grid.points.empty()) throw ConfigError("sweep grid has no points");
  std::vector<ScenarioConfig> configs;
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    configs.push_back(apply_point(base, grid.points[i], i));
    try {
      resolve_scenario(configs.back());
    } catch (const ConfigError& e) {
      throw ConfigError("sweep point " + std::to_string(i) + ": " + e.what());
    }
  }

  SweepOutcome outcome;
  outcome.rows.resize(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      SweepRow& row = outcome.rows[i];
      row.index = i;
      row.point = grid.points[i];
      char dir[32];
      std::snprintf(dir, sizeof dir, "point_%03zu", i);
      try {
        const ScenarioOutcome res = run_scenario(configs[i], out_dir / dir);
        const Trajectory& traj = res.trajectory;
        row.ok = res.exit != ExitCode::integration_error;
        row.exit = res.exit;
        row.status = row.ok ? "ok" : res.error;
        row.termination = traj.termination;
        row.t_final = traj.t_final();
        row.final_energy = traj.samples.empty() ? 0.0 : traj.samples.back().energy;
        if (!traj.samples.empty()) {
          const ResolvedScenario rs = resolve_scenario(configs[i]);
          row.tail_sqrt_lambda_v =
              tail_asymptotics(traj, rs.schedule, rs.potential).tail_sup_sqrt_lambda_v;
        }
        row.checks_pass = res.exit == ExitCode::pass;
      } catch (const std::exception& e) {
        row.ok = false;
        row.exit = ExitCode::integration_error;
        row.status = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (const auto& row : outcome.rows)
    outcome.exit = static_cast<ExitCode>(std::max(static_cast<int>(outcome.exit),
                                                  static_cast<int>(row.exit)));
  outcome.table_path = out_dir / "sweep_summary.csv";
  write_text(outcome.table_path, sweep_table_csv(grid, outcome));
  return outcome;
}

std::string sweep_table_csv(const SweepGrid& grid, const SweepOutcome& outcome) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  auto quote = [](std::string s) {
    for (auto& c : s)
      if (c == '"' || c == '\n') c = '\'';
    return "\"" + s + "\"";
  };
  std::ostringstream os;
  os << "index";
  for (const auto& k : grid.keys) os << "," << k;
  os << ",termination,t_final,final_energy,tail_sqrt_lambda_v,checks_pass,status\n";
  for (const auto& row : outcome.rows) {
    os << row.index;
    for (const auto& k : grid.keys) {
      os << ",";
      for (const auto& [pk, pv] : row.point)
        if (pk == k) os << num(pv);
    }
    os << "," << (row.termination ? to_string(*row.termination) : "error") << ","
       << num(row.t_final) << "," << num(row.final_energy) << ","
       << num(row.tail_sqrt_lambda_v) << "," << (row.checks_pass ? "true" : "false") << ","
       << quote(row.status) << "\n";
  }
  return os.str();
}

}  // namespace hbft
