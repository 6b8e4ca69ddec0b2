#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/integrate.hpp"

namespace hbft {

struct ComponentRef {
  std::string name;
  ParamMap params;
};

struct CheckRequest {
  std::string name;
  ParamMap params;
};

struct OutputSpec {
  std::string trajectory_csv;  // empty: <name>.csv
  std::string report_json;     // empty: <name>.report.json
  std::string summary_txt;     // empty: <name>.summary.txt
};

/// Declarative description of one simulation plus the certificates to run.
struct ScenarioConfig {
  std::string name = "scenario";
  std::string source;  // file the config came from, for messages
  ModelKind model = ModelKind::hbft;
  ComponentRef potential;
  ComponentRef schedule;
  Vec x0;
  Vec v0;
  std::optional<MechanicalParams> mechanical;
  IntegratorConfig integrator;
  std::vector<CheckRequest> checks;
  OutputSpec outputs;
  // field path -> 1-based line in `source`, for line-anchored messages
  std::map<std::string, int> lines;

  /// "file:line: field: " prefix for messages about `field`.
  std::string where(const std::string& field) const;
};

/// Parses YAML text. Throws ConfigError with a line-anchored message.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<string>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Names accepted in the `checks` list.
const std::vector<std::string>& known_checks();

/// Potential, schedule and field resolved from a validated config.
struct ResolvedScenario {
  Potential potential;
  FrictionSchedule schedule;
  VectorField field;
};

/// Builds every component and cross-checks dimensions, capabilities and
/// check parameters. Throws ConfigError naming the offending field.
ResolvedScenario resolve_scenario(const ScenarioConfig& cfg);

/// The reduced counterpart of the surface model:
/// x'' + (lambda/m) x' + g grad Phi = 0.
VectorField make_reduced_surface_field(const Potential& p, const FrictionSchedule& s,
                                       const MechanicalParams& mp);

/// Runs every requested check. Refuses (without running checks) when the
/// potential is unbounded below.
CertificationReport certify(const ScenarioConfig& cfg, const ResolvedScenario& rs,
                            const Trajectory& traj);

enum class ExitCode : int { pass = 0, check_failure = 1, config_error = 2, integration_error = 3 };

struct ScenarioOutcome {
  Trajectory trajectory;
  CertificationReport report;
  ExitCode exit = ExitCode::pass;
  std::string error;  // integration hard error, if any
  std::string summary;
  std::filesystem::path csv_path;
  std::filesystem::path report_path;
  std::filesystem::path summary_path;
};

/// Integrates, certifies and writes the CSV, JSON report and text summary
/// under `out_dir`. Config problems throw ConfigError; integration hard
/// errors are reported in the outcome with the partial trajectory written.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace hbft
