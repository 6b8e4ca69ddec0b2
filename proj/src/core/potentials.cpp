#include "core/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/error.hpp"

namespace hbft {

Potential::Potential(Definition def) : def_(std::move(def)) {
  if (def_.dim < 1) throw InputError("potential '" + def_.name + "': dim must be >= 1");
  if (!def_.value || !def_.gradient)
    throw InputError("potential '" + def_.name + "': value and gradient are required");
  for (const auto& p : def_.critical_points)
    if (p.size() != def_.dim)
      throw InputError("potential '" + def_.name + "': critical point has wrong dimension");
}

void Potential::check_dim(std::span<const double> x, const char* what) const {
  if (x.size() != def_.dim)
    throw InputError(std::string(what) + ": expected length " + std::to_string(def_.dim) +
                     " for potential '" + def_.name + "', got " +
                     std::to_string(x.size()));
}

double Potential::value(std::span<const double> x) const {
  check_dim(x, "value");
  return def_.value(x);
}

Vec Potential::gradient(std::span<const double> x) const {
  Vec out(def_.dim);
  gradient_into(x, out);
  return out;
}

void Potential::gradient_into(std::span<const double> x, std::span<double> out) const {
  check_dim(x, "gradient");
  if (out.size() != def_.dim) throw InputError("gradient: output buffer has wrong length");
  def_.gradient(x, out);
}

double Potential::hessian_quadform(std::span<const double> x,
                                   std::span<const double> v) const {
  if (!has_hessian())
    throw CapabilityError("potential '" + def_.name +
                          "' has no Hessian quadratic form; use the finite-difference "
                          "fallback hessian_quadform_fd");
  check_dim(x, "hessian_quadform(x)");
  check_dim(v, "hessian_quadform(v)");
  return def_.hessian_quadform(x, v);
}

double validate_gradient(const Potential& p, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw InputError("validate_gradient: step h must be > 0");
  const Vec g = p.gradient(x);
  Vec probe(x.begin(), x.end());
  double residual = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double xi = probe[i];
    probe[i] = xi + h;
    const double fp = p.value(probe);
    probe[i] = xi - h;
    const double fm = p.value(probe);
    probe[i] = xi;
    residual = std::max(residual, std::abs((fp - fm) / (2.0 * h) - g[i]));
  }
  return residual;
}

double hessian_quadform_fd(const Potential& p, std::span<const double> x,
                           std::span<const double> v, double h) {
  if (!(h > 0.0)) throw InputError("hessian_quadform_fd: step h must be > 0");
  if (v.size() != p.dim()) throw InputError("hessian_quadform_fd: v has wrong length");
  Vec plus(x.begin(), x.end()), minus(x.begin(), x.end());
  for (std::size_t i = 0; i < plus.size(); ++i) {
    plus[i] += h * v[i];
    minus[i] -= h * v[i];
  }
  return (p.value(plus) - 2.0 * p.value(x) + p.value(minus)) / (h * h);
}

LipschitzEstimate estimate_gradient_lipschitz(const Potential& p,
                                              std::span<const double> center,
                                              double radius, std::size_t pairs,
                                              std::uint64_t seed) {
  if (center.size() != p.dim()) throw InputError("lipschitz: center has wrong length");
  if (!(radius > 0.0)) throw InputError("lipschitz: radius must be > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = p.dim();

  // Uniform point in the ball: gaussian direction, radius scaled by U^(1/n).
  auto draw = [&] {
    Vec dir(n);
    for (auto& d : dir) d = gauss(rng);
    const double len = norm(dir);
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
    Vec pt(n);
    for (std::size_t i = 0; i < n; ++i) pt[i] = center[i] + (len > 0 ? r * dir[i] / len : 0.0);
    return pt;
  };

  LipschitzEstimate est{0.0, pairs, radius};
  Vec diff_x(n), diff_g(n);
  for (std::size_t k = 0; k < pairs; ++k) {
    const Vec a = draw(), b = draw();
    const Vec ga = p.gradient(a), gb = p.gradient(b);
    for (std::size_t i = 0; i < n; ++i) {
      diff_x[i] = a[i] - b[i];
      diff_g[i] = ga[i] - gb[i];
    }
    const double dx = norm(diff_x);
    if (dx > 1e-12) est.constant = std::max(est.constant, norm(diff_g) / dx);
  }
  return est;
}

// Builtins --------------------------------------------------------------------

namespace {

std::size_t dim_param(const ParamMap& params, const char* owner, double fallback) {
  const double d = params.scalar("dim", fallback);
  if (!(d >= 1.0) || d != std::floor(d) || d > 1e6)
    throw InputError(std::string(owner) + ": 'dim' must be a positive integer");
  return static_cast<std::size_t>(d);
}

Potential quadratic(const ParamMap& params) {
  params.require_known("quadratic", {"dim", "scale"});
  const std::size_t n = dim_param(params, "quadratic", 2);
  const double scale = params.scalar("scale", 1.0);
  if (!(scale >= 0.0)) throw InputError("quadratic: 'scale' must be >= 0");
  Potential::Definition def;
  def.name = "quadratic";
  def.dim = n;
  def.params = params;
  def.value = [scale](std::span<const double> x) { return 0.5 * scale * dot(x, x); };
  def.gradient = [scale](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = scale * x[i];
  };
  def.hessian_quadform = [scale](std::span<const double>, std::span<const double> v) {
    return scale * dot(v, v);
  };
  def.lower_bound = 0.0;
  def.critical_points = {Vec(n, 0.0)};
  return Potential(std::move(def));
}

Potential anisotropic_quadratic(const ParamMap& params) {
  params.require_known("anisotropic_quadratic", {"diag"});
  const Vec diag = params.list("diag");
  if (diag.empty()) throw InputError("anisotropic_quadratic: 'diag' must be non-empty");
  for (double d : diag)
    if (!(d >= 0.0)) throw InputError("anisotropic_quadratic: 'diag' entries must be >= 0");
  Potential::Definition def;
  def.name = "anisotropic_quadratic";
  def.dim = diag.size();
  def.params = params;
  def.value = [diag](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += diag[i] * x[i] * x[i];
    return 0.5 * acc;
  };
  def.gradient = [diag](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = diag[i] * x[i];
  };
  def.hessian_quadform = [diag](std::span<const double>, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += diag[i] * v[i] * v[i];
    return acc;
  };
  def.lower_bound = 0.0;
  def.critical_points = {Vec(diag.size(), 0.0)};
  return Potential(std::move(def));
}

// (a - x)^2 + b (y - x^2)^2
Potential rosenbrock(const ParamMap& params) {
  params.require_known("rosenbrock", {"a", "b"});
  const double a = params.scalar("a", 1.0);
  const double b = params.scalar("b", 100.0);
  if (!(b > 0.0)) throw InputError("rosenbrock: 'b' must be > 0");
  Potential::Definition def;
  def.name = "rosenbrock";
  def.dim = 2;
  def.params = params;
  def.value = [a, b](std::span<const double> x) {
    const double r = x[1] - x[0] * x[0];
    return (a - x[0]) * (a - x[0]) + b * r * r;
  };
  def.gradient = [a, b](std::span<const double> x, std::span<double> g) {
    const double r = x[1] - x[0] * x[0];
    g[0] = -2.0 * (a - x[0]) - 4.0 * b * x[0] * r;
    g[1] = 2.0 * b * r;
  };
  def.hessian_quadform = [b](std::span<const double> x, std::span<const double> v) {
    const double h00 = 2.0 - 4.0 * b * (x[1] - x[0] * x[0]) + 8.0 * b * x[0] * x[0];
    const double h01 = -4.0 * b * x[0];
    const double h11 = 2.0 * b;
    return h00 * v[0] * v[0] + 2.0 * h01 * v[0] * v[1] + h11 * v[1] * v[1];
  };
  def.lower_bound = 0.0;
  def.critical_points = {Vec{a, a * a}};
  return Potential(std::move(def));
}

// x^4/4 - x^2/2, minima at +-1, saddle at 0
Potential double_well(const ParamMap& params) {
  params.require_known("double_well", {});
  Potential::Definition def;
  def.name = "double_well";
  def.dim = 1;
  def.params = params;
  def.value = [](std::span<const double> x) {
    const double s = x[0] * x[0];
    return 0.25 * s * s - 0.5 * s;
  };
  def.gradient = [](std::span<const double> x, std::span<double> g) {
    g[0] = x[0] * x[0] * x[0] - x[0];
  };
  def.hessian_quadform = [](std::span<const double> x, std::span<const double> v) {
    return (3.0 * x[0] * x[0] - 1.0) * v[0] * v[0];
  };
  def.lower_bound = -0.25;
  def.critical_points = {Vec{-1.0}, Vec{0.0}, Vec{1.0}};
  return Potential(std::move(def));
}

// 1/2 |x|^2 + amplitude * sum sin^2(frequency * x_i): bounded below by 0,
// nonconvex once 2 * amplitude * frequency^2 > 1.
Potential eggcrate(const ParamMap& params) {
  params.require_known("eggcrate", {"dim", "amplitude", "frequency"});
  const std::size_t n = dim_param(params, "eggcrate", 2);
  const double amp = params.scalar("amplitude", 1.0);
  const double freq = params.scalar("frequency", 2.0);
  if (!(amp >= 0.0)) throw InputError("eggcrate: 'amplitude' must be >= 0");
  Potential::Definition def;
  def.name = "eggcrate";
  def.dim = n;
  def.params = params;
  def.value = [amp, freq](std::span<const double> x) {
    double acc = 0.5 * dot(x, x);
    for (double xi : x) {
      const double s = std::sin(freq * xi);
      acc += amp * s * s;
    }
    return acc;
  };
  def.gradient = [amp, freq](std::span<const double> x, std::span<double> g) {
    for (std::size_t i = 0; i < x.size(); ++i)
      g[i] = x[i] + amp * freq * std::sin(2.0 * freq * x[i]);
  };
  def.hessian_quadform = [amp, freq](std::span<const double> x, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      acc += (1.0 + 2.0 * amp * freq * freq * std::cos(2.0 * freq * x[i])) * v[i] * v[i];
    return acc;
  };
  def.lower_bound = 0.0;
  def.critical_points = {Vec(n, 0.0)};
  return Potential(std::move(def));
}

Potential flat(const ParamMap& params) {
  params.require_known("flat", {"dim"});
  const std::size_t n = dim_param(params, "flat", 2);
  Potential::Definition def;
  def.name = "flat";
  def.dim = n;
  def.params = params;
  def.value = [](std::span<const double>) { return 0.0; };
  def.gradient = [](std::span<const double>, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
  };
  def.hessian_quadform = [](std::span<const double>, std::span<const double>) {
    return 0.0;
  };
  def.lower_bound = 0.0;
  def.critical_points = {Vec(n, 0.0)};
  return Potential(std::move(def));
}

// slope * x_0: unbounded below, kept for negative tests.
Potential linear_slope(const ParamMap& params) {
  params.require_known("linear_slope", {"dim", "slope"});
  const std::size_t n = dim_param(params, "linear_slope", 1);
  const double slope = params.scalar("slope", 1.0);
  Potential::Definition def;
  def.name = "linear_slope";
  def.dim = n;
  def.params = params;
  def.value = [slope](std::span<const double> x) { return slope * x[0]; };
  def.gradient = [slope](std::span<const double>, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = slope;
  };
  def.hessian_quadform = [](std::span<const double>, std::span<const double>) {
    return 0.0;
  };
  def.unbounded_below = slope != 0.0;
  if (slope == 0.0) {
    def.lower_bound = 0.0;
    def.critical_points = {Vec(n, 0.0)};
  }
  return Potential(std::move(def));
}

struct Builtin {
  CatalogueEntry entry;
  Potential (*make)(const ParamMap&);
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = {
      {{"quadratic", "scale/2 |x|^2; params dim=2, scale=1"}, quadratic},
      {{"anisotropic_quadratic", "1/2 x^T diag(d) x; params diag (list, required)"},
       anisotropic_quadratic},
      {{"rosenbrock", "(a-x)^2 + b(y-x^2)^2, n=2; params a=1, b=100"}, rosenbrock},
      {{"double_well", "x^4/4 - x^2/2, n=1; minima at -1 and +1"}, double_well},
      {{"eggcrate",
        "1/2|x|^2 + amplitude*sum sin^2(frequency*x_i); params dim=2, amplitude=1, "
        "frequency=2"},
       eggcrate},
      {{"flat", "Phi = 0; params dim=2"}, flat},
      {{"linear_slope",
        "slope*x_0, unbounded below; params dim=1, slope=1"},
       linear_slope},
  };
  return table;
}

}  // namespace

const std::vector<CatalogueEntry>& potential_catalogue() {
  static const std::vector<CatalogueEntry> entries = [] {
    std::vector<CatalogueEntry> out;
    for (const auto& b : builtins()) out.push_back(b.entry);
    return out;
  }();
  return entries;
}

Potential make_potential(const std::string& name, const ParamMap& params) {
  for (const auto& b : builtins())
    if (b.entry.name == name) return b.make(params);
  throw InputError("unknown potential '" + name + "'");
}

}  // namespace hbft
