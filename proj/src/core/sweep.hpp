#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/scenario.hpp"

namespace hbft {

/// One grid point: overrides such as {"schedule.lambda0", 0.1}.
using SweepPoint = std::vector<std::pair<std::string, double>>;

/// Either a cartesian product (`grid:` mapping of key -> list) or an
/// explicit `points:` list of mappings. Keys are `potential.<param>`,
/// `schedule.<param>` or `integrator.t_max`.
struct SweepGrid {
  std::vector<SweepPoint> points;
  std::vector<std::string> keys;  // union of keys in first-seen order
};

SweepGrid parse_sweep_grid(const std::string& text, const std::string& source = "<grid>");
SweepGrid load_sweep_grid(const std::filesystem::path& path);

/// Base config with one point's overrides applied; name gets a _NNN suffix.
ScenarioConfig apply_point(const ScenarioConfig& base, const SweepPoint& point,
                           std::size_t index);

struct SweepRow {
  std::size_t index = 0;
  SweepPoint point;
  bool ok = false;  // ran to completion without a hard error
  std::string status;
  std::optional<Termination> termination;  // empty when the point failed
  double t_final = 0.0;
  double final_energy = 0.0;
  double tail_sqrt_lambda_v = 0.0;
  bool checks_pass = false;
  ExitCode exit = ExitCode::pass;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  ExitCode exit = ExitCode::pass;
  std::filesystem::path table_path;
};

/// Runs every point on `workers` threads (0 = hardware concurrency). Each
/// point writes into out_dir/point_NNN; a failing point is recorded in the
/// table and the others continue. Throws ConfigError for an empty grid or a
/// point that does not validate.
SweepOutcome run_sweep(const ScenarioConfig& base, const SweepGrid& grid,
                       const std::filesystem::path& out_dir, unsigned workers = 0);

std::string sweep_table_csv(const SweepGrid& grid, const SweepOutcome& outcome);

}  // namespace hbft
