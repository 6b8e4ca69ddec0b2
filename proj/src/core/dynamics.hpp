#pragma once

#include <functional>
#include <optional>
#include <string>

#include "core/friction.hpp"
#include "core/potentials.hpp"
#include "core/vec.hpp"

namespace hbft {

/// Phase-space point Y = (x, v) at time t.
struct PhaseState {
  double t = 0.0;
  Vec x;
  Vec v;
};

struct StateDerivative {
  Vec dx;
  Vec dv;
};

/// Mass and gravity of the bead-on-surface model. The normalized equation
/// x'' + lambda x' + grad Phi = 0 has neither.
struct MechanicalParams {
  double mass = 1.0;
  double gravity = 1.0;
};

void validate(const MechanicalParams& mp);

struct ReactionForce {
  double magnitude = 0.0;
  bool contact_lost = false;  // magnitude <= 0
};

/// dx = v, dv = -lambda(t) v - grad Phi(x).
StateDerivative hbft_field(const Potential& p, const FrictionSchedule& s,
                           const PhaseState& state);

/// Graph-constrained bead with viscous friction:
/// dx = v, dv = -(lambda/m) v - (g + v^T H v) / (1 + |grad Phi|^2) grad Phi.
StateDerivative full_surface_field(const Potential& p, const FrictionSchedule& s,
                                   const MechanicalParams& mp, const PhaseState& state);

/// Normal reaction R = m (g + v^T H v) / sqrt(1 + |grad Phi|^2).
ReactionForce reaction_force(const Potential& p, const MechanicalParams& mp,
                             const PhaseState& state);

/// E = 1/2 |v|^2 + Phi(x).
double energy(const Potential& p, const PhaseState& state);

/// dE/dt along exact solutions: -lambda(t) |v|^2.
double dissipation_rate(const FrictionSchedule& s, const PhaseState& state);

enum class ModelKind { hbft, full_surface };

const char* to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(const std::string& text);

/// A right-hand side bound to its potential, schedule and (for the surface
/// model) mechanical parameters. Cheap to copy; immutable.
class VectorField {
 public:
  using Eval = std::function<StateDerivative(const PhaseState&)>;
  using Contact = std::function<ReactionForce(const PhaseState&)>;

  VectorField(ModelKind kind, std::size_t dim, Eval eval, Contact contact = {});

  ModelKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  StateDerivative operator()(const PhaseState& state) const { return eval_(state); }

  bool monitors_contact() const { return static_cast<bool>(contact_); }
  ReactionForce contact(const PhaseState& state) const { return contact_(state); }

 private:
  ModelKind kind_;
  std::size_t dim_;
  Eval eval_;
  Contact contact_;
};

VectorField make_hbft_field(const Potential& p, const FrictionSchedule& s);
VectorField make_full_surface_field(const Potential& p, const FrictionSchedule& s,
                                    const MechanicalParams& mp);

}  // namespace hbft
