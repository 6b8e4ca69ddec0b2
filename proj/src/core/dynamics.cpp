#include "core/dynamics.hpp"

#include <cmath>

#include "core/error.hpp"

namespace hbft {

namespace {

void check_state(const Potential& p, const PhaseState& state) {
  if (state.x.size() != p.dim() || state.v.size() != p.dim())
    throw InputError("state dimension (" + std::to_string(state.x.size()) + ", " +
                     std::to_string(state.v.size()) + ") does not match potential '" +
                     p.name() + "' of dim " + std::to_string(p.dim()));
  if (!std::isfinite(state.t) || !all_finite(state.x) || !all_finite(state.v))
    throw DivergenceError("non-finite state at t=" + std::to_string(state.t));
  if (state.t < 0.0) throw InputError("state time must be >= 0");
}

}  // namespace

void validate(const MechanicalParams& mp) {
  if (!(mp.mass > 0.0)) throw InputError("mechanical: mass must be > 0");
  if (!(mp.gravity > 0.0)) throw InputError("mechanical: gravity must be > 0");
}

StateDerivative hbft_field(const Potential& p, const FrictionSchedule& s,
                           const PhaseState& state) {
  check_state(p, state);
  const double lam = s.lambda_at(state.t);
  StateDerivative d{state.v, Vec(p.dim())};
  p.gradient_into(state.x, d.dv);
  for (std::size_t i = 0; i < d.dv.size(); ++i) d.dv[i] = -lam * state.v[i] - d.dv[i];
  return d;
}

StateDerivative full_surface_field(const Potential& p, const FrictionSchedule& s,
                                   const MechanicalParams& mp, const PhaseState& state) {
  if (!p.has_hessian())
    throw CapabilityError("full surface model needs the Hessian quadratic form of '" +
                          p.name() + "'");
  validate(mp);
  check_state(p, state);
  const double lam = s.lambda_at(state.t);
  StateDerivative d{state.v, Vec(p.dim())};
  p.gradient_into(state.x, d.dv);
  const double grad_sq = dot(d.dv, d.dv);
  const double coupling =
      (mp.gravity + p.hessian_quadform(state.x, state.v)) / (1.0 + grad_sq);
  for (std::size_t i = 0; i < d.dv.size(); ++i)
    d.dv[i] = -(lam / mp.mass) * state.v[i] - coupling * d.dv[i];
  return d;
}

ReactionForce reaction_force(const Potential& p, const MechanicalParams& mp,
                             const PhaseState& state) {
  if (!p.has_hessian())
    throw CapabilityError("reaction force needs the Hessian quadratic form of '" + p.name() +
                          "'");
  validate(mp);
  check_state(p, state);
  const Vec g = p.gradient(state.x);
  const double r = mp.mass * (mp.gravity + p.hessian_quadform(state.x, state.v)) /
                   std::sqrt(1.0 + dot(g, g));
  return {r, r <= 0.0};
}

double energy(const Potential& p, const PhaseState& state) {
  if (state.v.size() != p.dim())
    throw InputError("energy: velocity has wrong dimension");
  return 0.5 * dot(state.v, state.v) + p.value(state.x);
}

double dissipation_rate(const FrictionSchedule& s, const PhaseState& state) {
  return -s.lambda_at(state.t) * dot(state.v, state.v);
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::hbft: return "hbft";
    case ModelKind::full_surface: return "full_surface";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(const std::string& text) {
  if (text == "hbft") return ModelKind::hbft;
  if (text == "full_surface") return ModelKind::full_surface;
  return std::nullopt;
}

VectorField::VectorField(ModelKind kind, std::size_t dim, Eval eval, Contact contact)
    : kind_(kind), dim_(dim), eval_(std::move(eval)), contact_(std::move(contact)) {}

VectorField make_hbft_field(const Potential& p, const FrictionSchedule& s) {
  return VectorField(ModelKind::hbft, p.dim(),
                     [p, s](const PhaseState& y) { return hbft_field(p, s, y); });
}

VectorField make_full_surface_field(const Potential& p, const FrictionSchedule& s,
                                    const MechanicalParams& mp) {
  if (!p.has_hessian())
    throw CapabilityError("full surface model needs the Hessian quadratic form of '" +
                          p.name() + "'");
  validate(mp);
  return VectorField(
      ModelKind::full_surface, p.dim(),
      [p, s, mp](const PhaseState& y) { return full_surface_field(p, s, mp, y); },
      [p, mp](const PhaseState& y) { return reaction_force(p, mp, y); });
}

}  // namespace hbft
