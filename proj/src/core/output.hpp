#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "core/scenario.hpp"

namespace hbft {

/// Columns: t, x_0..x_{n-1}, v_0..v_{n-1}, E, lambda, grad_norm, dissipation.
/// Numbers are written with 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

std::string report_json(const ScenarioConfig& cfg, const ScenarioOutcome& outcome);

std::string render_summary(const ScenarioConfig& cfg, const ScenarioOutcome& outcome);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hbft
