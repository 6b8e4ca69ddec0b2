#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/integrate.hpp"
#include "core/params.hpp"
#include "core/potentials.hpp"

namespace hbft::test {

inline ParamMap params(std::initializer_list<std::pair<const char*, double>> kv) {
  ParamMap m;
  for (const auto& [k, v] : kv) m.set(k, {v});
  return m;
}

// Unit damped oscillator x'' + x' + x = 0 from x(0) = 1, v(0) = 0.
struct DampedHarmonic {
  static constexpr double omega = 0.8660254037844386;  // sqrt(3)/2
  static double x(double t) {
    return std::exp(-t / 2) * (std::cos(omega * t) + std::sin(omega * t) / std::sqrt(3.0));
  }
  static double v(double t) {
    return -std::exp(-t / 2) * std::sin(omega * t) * 2.0 / std::sqrt(3.0);
  }
};

inline std::vector<Vec> random_points(std::size_t dim, std::size_t count, double box,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<Vec> out(count, Vec(dim));
  for (auto& p : out)
    for (auto& c : p) c = u(rng);
  return out;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hbft_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Fixed-step RK4 config with the stationarity stop disabled.
inline IntegratorConfig rk4(double h, double t_max) {
  IntegratorConfig cfg;
  cfg.method = Method::rk4;
  cfg.step = h;
  cfg.t_max = t_max;
  cfg.stop.dwell = 10.0 * t_max;
  return cfg;
}

}  // namespace hbft::test
