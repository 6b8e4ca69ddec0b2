#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "support.hpp"

namespace {

const std::string kCli = HBFT_CLI_PATH;
const std::string kScenarios = HBFT_SCENARIO_DIR;

struct Result {
  int exit = -1;
  std::string output;
};

Result run(const std::string& args) {
  Result r;
  const std::string cmd = kCli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scenario(const std::string& name) { return kScenarios + "/" + name; }

}  // namespace

TEST(Cli, ListsCatalogues) {
  const auto p = run("list-potentials");
  EXPECT_EQ(p.exit, 0);
  EXPECT_NE(p.output.find("rosenbrock"), std::string::npos);
  const auto s = run("list-schedules");
  EXPECT_EQ(s.exit, 0);
  EXPECT_NE(s.output.find("linear_growth"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").exit, 2);
  EXPECT_EQ(run("frobnicate").exit, 2);
  EXPECT_EQ(run("simulate").exit, 2);
  EXPECT_EQ(run("simulate /no/such/file.cfg").exit, 2);
  EXPECT_EQ(run("sweep " + scenario("sweep_base.cfg")).exit, 2);
  EXPECT_EQ(run("--help").exit, 0);
}

TEST(Cli, ValidateReportsLineAnchoredErrors) {
  const auto dir = hbft::test::scratch_dir("cli_validate");
  const auto bad = dir / "bad.cfg";
  std::ofstream(bad) << "potential:\n  name: quadratic\nschedule:\n  name: constant\n"
                        "initial:\n  x: [1, 2, 3]\n";
  const auto r = run("validate " + bad.string());
  EXPECT_EQ(r.exit, 2);
  EXPECT_NE(r.output.find("bad.cfg:6: initial.x"), std::string::npos) << r.output;
  EXPECT_EQ(run("validate " + scenario("damped_harmonic.cfg")).exit, 0);
}

TEST(Cli, SimulateExitCodesFollowChecks) {
  const auto dir = hbft::test::scratch_dir("cli_sim");
  const auto ok = run("simulate " + scenario("damped_harmonic.cfg") + " --out-dir " + dir.string());
  EXPECT_EQ(ok.exit, 0) << ok.output;
  EXPECT_NE(ok.output.find("result       PASS"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "damped_harmonic.csv"));

  const auto fail = run("--quiet simulate " + scenario("linear_growth_friction.cfg") +
                        " --out-dir " + dir.string());
  EXPECT_EQ(fail.exit, 1);
  EXPECT_TRUE(fail.output.empty()) << fail.output;
}

TEST(Cli, IntegrationHardErrorExitsThree) {
  const auto dir = hbft::test::scratch_dir("cli_stiff");
  const auto cfg = dir / "stiff.cfg";
  std::ofstream(cfg) << "name: stiff\npotential: {name: quadratic, params: {dim: 1}}\n"
                        "schedule: {name: constant, params: {lambda0: 1.0e7}}\n"
                        "initial: {x: [1.0], v: [1.0]}\n"
                        "integrator: {h_min: 1.0e-3, t_max: 1}\n";
  const auto r = run("simulate " + cfg.string() + " --out-dir " + dir.string());
  EXPECT_EQ(r.exit, 3) << r.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "stiff.csv"));
}

TEST(Cli, OutDirDefaultsToEnvironment) {
  const auto dir = hbft::test::scratch_dir("cli_env");
  const std::string cmd = "HBFT_OUT_DIR=" + dir.string() + " " + kCli + " -q simulate " +
                          scenario("double_well.cfg") + " --seed 5 > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "double_well.csv"));
}

TEST(Cli, SweepWritesTableAndIsolatesFailures) {
  const auto dir = hbft::test::scratch_dir("cli_sweep");
  const auto r = run("sweep " + scenario("sweep_base.cfg") + " --grid " +
                     scenario("with_divergence.grid") + " --workers 2 --out-dir " + dir.string());
  EXPECT_EQ(r.exit, 1) << r.output;
  EXPECT_NE(r.output.find("diverged"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "sweep_summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "point_002" / "sweep_002.csv"));
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const auto a = hbft::test::scratch_dir("cli_det_a");
  const auto b = hbft::test::scratch_dir("cli_det_b");
  for (const auto& d : {a, b})
    ASSERT_EQ(run("-q simulate " + scenario("oscillating_friction.cfg") + " --out-dir " +
                  d.string()).exit,
              0);
  EXPECT_EQ(hbft::test::slurp(a / "oscillating_friction.csv"),
            hbft::test::slurp(b / "oscillating_friction.csv"));
}
