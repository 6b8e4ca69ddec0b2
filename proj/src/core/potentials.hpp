#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/params.hpp"
#include "core/vec.hpp"

namespace hbft {

/// The potential landscape Phi: R^n -> R together with its first derivative
/// and, when available, the Hessian quadratic form v^T H(x) v.
///
/// Immutable after construction; copies share nothing mutable, so a
/// Potential may be read from any number of threads.
class Potential {
 public:
  using ValueFn = std::function<double(std::span<const double>)>;
  using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;
  using QuadFormFn =
      std::function<double(std::span<const double>, std::span<const double>)>;

  struct Definition {
    std::string name;
    std::size_t dim = 0;
    ValueFn value;
    GradientFn gradient;
    QuadFormFn hessian_quadform;  // optional
    std::optional<double> lower_bound;
    std::vector<Vec> critical_points;
    bool unbounded_below = false;  // simulation only, never certified
    ParamMap params;
  };

  explicit Potential(Definition def);

  const std::string& name() const { return def_.name; }
  std::size_t dim() const { return def_.dim; }
  const ParamMap& params() const { return def_.params; }
  const std::optional<double>& lower_bound() const { return def_.lower_bound; }
  const std::vector<Vec>& critical_points() const { return def_.critical_points; }
  bool unbounded_below() const { return def_.unbounded_below; }
  bool has_hessian() const { return static_cast<bool>(def_.hessian_quadform); }

  double value(std::span<const double> x) const;
  Vec gradient(std::span<const double> x) const;
  void gradient_into(std::span<const double> x, std::span<double> out) const;

  /// v^T H(x) v. Throws CapabilityError when the Hessian form is absent;
  /// callers should then fall back to `hessian_quadform_fd`.
  double hessian_quadform(std::span<const double> x, std::span<const double> v) const;

 private:
  void check_dim(std::span<const double> x, const char* what) const;

  Definition def_;
};

inline constexpr double kDefaultFdStep = 1e-5;

/// Max over coordinates of |central difference of Phi - gradient|.
double validate_gradient(const Potential& p, std::span<const double> x,
                         double h = kDefaultFdStep);

/// Second central difference of Phi along v: (Phi(x+hv) - 2Phi(x) + Phi(x-hv)) / h^2.
double hessian_quadform_fd(const Potential& p, std::span<const double> x,
                           std::span<const double> v, double h = 1e-4);

/// Sampled estimate of the local Lipschitz constant of the gradient on the
/// ball B(center, radius): max |grad(a) - grad(b)| / |a - b| over random pairs.
/// A sampling certificate, not a bound.
struct LipschitzEstimate {
  double constant = 0.0;
  std::size_t pairs = 0;
  double radius = 0.0;
};

LipschitzEstimate estimate_gradient_lipschitz(const Potential& p,
                                              std::span<const double> center,
                                              double radius, std::size_t pairs,
                                              std::uint64_t seed = 7);

// Builtin catalogue -----------------------------------------------------------

struct CatalogueEntry {
  std::string name;
  std::string description;
};

const std::vector<CatalogueEntry>& potential_catalogue();

/// Builds a builtin by name. Throws InputError for unknown names or
/// malformed parameters.
Potential make_potential(const std::string& name, const ParamMap& params = {});

}  // namespace hbft
