// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "hbft/hbft.h"

namespace {

enum Exit : int { kPass = 0, kCheckFailure = 1, kUsage = 2, kIntegration = 3 };

struct Options {
  std::string config;
  std::string grid;
  std::string out_dir;
  unsigned workers = 0;
  long seed = 0;  // accepted for forward compatibility; runs are deterministic
  bool quiet = false;
};

std::string default_out_dir() {
  const char* env = std::getenv("HBFT_OUT_DIR");
  return env && *env ? env : "hbft_out";
}

int exit_for(hbft_status st) {
  switch (st) {
    case HBFT_OK: return kPass;
    case HBFT_ERR_INTEGRATION:
    case HBFT_ERR_DIVERGENCE: return kIntegration;
    default: return kUsage;
  }
}

int report_error(hbft_status st) {
  std::cerr << "hbft: " << hbft_last_error() << "\n";
  return exit_for(st);
}

using ScenarioPtr = std::unique_ptr<hbft_scenario, decltype(&hbft_scenario_destroy)>;

ScenarioPtr load(const std::string& path, hbft_status& st) {
  hbft_scenario* sc = nullptr;
  st = hbft_scenario_load(path.c_str(), &sc);
  if (st == HBFT_OK) st = hbft_scenario_validate(sc);
  return ScenarioPtr(sc, hbft_scenario_destroy);
}

int cmd_validate(const Options& o) {
  hbft_status st;
  auto sc = load(o.config, st);
  if (st != HBFT_OK) return report_error(st);
  if (!o.quiet) std::cout << o.config << ": ok (" << hbft_scenario_name(sc.get()) << ")\n";
  return kPass;
}

int cmd_simulate(const Options& o) {
  hbft_status st;
  auto sc = load(o.config, st);
  if (st != HBFT_OK) return report_error(st);
  hbft_run* raw = nullptr;
  st = hbft_scenario_run(sc.get(), o.out_dir.c_str(), &raw);
  std::unique_ptr<hbft_run, decltype(&hbft_run_destroy)> run(raw, hbft_run_destroy);
  if (st != HBFT_OK) return report_error(st);
  if (!o.quiet) {
    std::cout << hbft_run_summary(run.get());
    std::cout << "trajectory: " << hbft_run_csv_path(run.get()) << "\n"
              << "report:     " << hbft_run_report_path(run.get()) << "\n";
  }
  return hbft_run_exit_code(run.get());
}

int cmd_sweep(const Options& o) {
  hbft_status st;
  auto sc = load(o.config, st);
  if (st != HBFT_OK) return report_error(st);
  hbft_sweep* raw = nullptr;
  st = hbft_sweep_run(sc.get(), o.grid.c_str(), o.out_dir.c_str(), o.workers, &raw);
  std::unique_ptr<hbft_sweep, decltype(&hbft_sweep_destroy)> sweep(raw, hbft_sweep_destroy);
  if (st != HBFT_OK) return report_error(st);
  if (!o.quiet) {
    std::cout << hbft_sweep_table(sweep.get());
    std::cout << "table: " << hbft_sweep_table_path(sweep.get()) << "\n";
  }
  return hbft_sweep_exit_code(sweep.get());
}

int list(size_t (*size)(), hbft_status (*entry)(size_t, const char**, const char**)) {
  for (size_t i = 0; i < size(); ++i) {
    const char* name = nullptr;
    const char* desc = nullptr;
    entry(i, &name, &desc);
    std::printf("%-22s %s\n", name, desc);
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  o.out_dir = default_out_dir();

  CLI::App app{"Heavy ball with time-dependent friction: simulate and certify"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hbft_version());
  app.add_option("--out-dir", o.out_dir, "Output directory (default: $HBFT_OUT_DIR or ./hbft_out)");
  app.add_option("--workers", o.workers, "Sweep worker threads (0 = hardware threads)");
  app.add_option("--seed", o.seed, "Reserved; integration is deterministic");
  app.add_flag("-q,--quiet", o.quiet, "Suppress summaries");

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and its checks");
  simulate->add_option("config", o.config)->required()->check(CLI::ExistingFile);
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a parameter grid");
  sweep->add_option("config", o.config)->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", o.grid, "Grid file")->required()->check(CLI::ExistingFile);
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  validate->add_option("config", o.config)->required()->check(CLI::ExistingFile);
  auto* list_p = app.add_subcommand("list-potentials", "List builtin potentials");
  auto* list_s = app.add_subcommand("list-schedules", "List builtin friction schedules");

  // Global flags are also accepted after the subcommand.
  for (auto* sub : {simulate, sweep, validate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (*simulate) return cmd_simulate(o);
  if (*sweep) return cmd_sweep(o);
  if (*validate) return cmd_validate(o);
  if (*list_p) return list(hbft_potential_catalogue_size, hbft_potential_catalogue_entry);
  if (*list_s) return list(hbft_schedule_catalogue_size, hbft_schedule_catalogue_entry);
  return kUsage;
}
