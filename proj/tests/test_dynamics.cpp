#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "core/dynamics.hpp"
#include "core/error.hpp"
#include "support.hpp"

using namespace hbft;
using hbft::test::params;

namespace {

const Potential kQuad = make_potential("quadratic");
const FrictionSchedule kOne = make_schedule("constant");

void expect_vec(const Vec& got, const Vec& want, double tol = 0.0) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "i=" << i;
}

}  // namespace

TEST(HbftField, RestingStateFeelsOnlyTheGradient) {
  const auto d = hbft_field(kQuad, kOne, {0.0, {1.0, 0.0}, {0.0, 0.0}});
  expect_vec(d.dx, {0.0, 0.0});
  expect_vec(d.dv, {-1.0, 0.0});
}

TEST(HbftField, EquilibriumAtEveryKnownCriticalPoint) {
  for (const auto& e : potential_catalogue()) {
    if (e.name == "anisotropic_quadratic") continue;
    const auto p = make_potential(e.name);
    for (const auto& c : p.critical_points()) {
      const auto d = hbft_field(p, kOne, {0.0, c, Vec(p.dim(), 0.0)});
      expect_vec(d.dx, Vec(p.dim(), 0.0));
      expect_vec(d.dv, Vec(p.dim(), 0.0), 1e-12);
    }
  }
}

TEST(HbftField, OscillatingFriction) {
  const auto d = hbft_field(kQuad, make_schedule("oscillating"), {0.0, {0.0, 1.0}, {1.0, 1.0}});
  expect_vec(d.dx, {1.0, 1.0});
  expect_vec(d.dv, {-2.0, -3.0});
}

TEST(HbftField, NonFiniteStateIsDivergence) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(hbft_field(kQuad, kOne, {0.0, {nan, 0.0}, {0.0, 0.0}}), DivergenceError);
  EXPECT_THROW(hbft_field(kQuad, kOne, {0.0, {0.0, 0.0}, {INFINITY, 0.0}}), DivergenceError);
}

TEST(HbftField, DimensionMismatchIsInputError) {
  EXPECT_THROW(hbft_field(kQuad, kOne, {0.0, {1.0}, {0.0}}), InputError);
}

TEST(FullSurfaceField, FlatFrictionlessHasNoForce) {
  const auto flat = make_potential("flat");
  const auto zero = make_schedule("constant", params({{"lambda0", 0.0}}));
  const auto d = full_surface_field(flat, zero, {}, {0.0, {0.3, -2.0}, {1.5, -0.5}});
  expect_vec(d.dv, {0.0, 0.0});
  expect_vec(d.dx, {1.5, -0.5});
}

TEST(FullSurfaceField, RestingOnTheBowl) {
  const auto d = full_surface_field(kQuad, kOne, {1.0, 1.0}, {0.0, {1.0, 0.0}, {0.0, 0.0}});
  expect_vec(d.dv, {-0.5, 0.0}, 1e-15);
}

TEST(FullSurfaceField, ShallowBowlMatchesReducedField) {
  const auto p = make_potential("quadratic", params({{"scale", 1e-3}}));
  const PhaseState y{0.0, {1.0, 0.0}, {0.1, 0.0}};
  const double g = 1.0;
  const auto full = full_surface_field(p, kOne, {1.0, g}, y);
  const auto reduced = hbft_field(p, kOne, y);
  const double rel = std::abs(full.dv[0] / g - reduced.dv[0]) / std::abs(reduced.dv[0]);
  EXPECT_LE(rel, 2e-3);
}

TEST(FullSurfaceField, MassScalesOnlyTheFriction) {
  const auto d = full_surface_field(make_potential("flat"), make_schedule("constant",
                                    params({{"lambda0", 3.0}})), {2.0, 1.0},
                                    {0.0, {0.0, 0.0}, {1.0, 0.0}});
  expect_vec(d.dv, {-1.5, 0.0}, 1e-15);
}

TEST(FullSurfaceField, NeedsHessian) {
  Potential::Definition def;
  def.name = "value_only";
  def.dim = 1;
  def.value = [](std::span<const double> x) { return x[0]; };
  def.gradient = [](std::span<const double>, std::span<double> g) { g[0] = 1.0; };
  const Potential p(def);
  EXPECT_THROW(full_surface_field(p, kOne, {}, {0.0, {0.0}, {0.0}}), CapabilityError);
  EXPECT_THROW(reaction_force(p, {}, {0.0, {0.0}, {0.0}}), CapabilityError);
  EXPECT_THROW(make_full_surface_field(p, kOne, {}), CapabilityError);
}

TEST(FullSurfaceField, NonFiniteStateIsDivergence) {
  EXPECT_THROW(full_surface_field(kQuad, kOne, {}, {0.0, {NAN, 0.0}, {0.0, 0.0}}),
               DivergenceError);
}

TEST(ReactionForce, FlatSurfaceCarriesTheWeight) {
  const auto r =
      reaction_force(make_potential("flat"), {1.0, 9.81}, {0.0, {0.5, 0.5}, {3.0, -1.0}});
  EXPECT_DOUBLE_EQ(r.magnitude, 9.81);
  EXPECT_FALSE(r.contact_lost);
}

TEST(ReactionForce, TiltedContact) {
  const auto r = reaction_force(kQuad, {2.0, 1.0}, {0.0, {1.0, 0.0}, {0.0, 0.0}});
  EXPECT_NEAR(r.magnitude, 1.41421356, 1e-8);
}

TEST(ReactionForce, FastOverTheHumpLosesContact) {
  const auto r = reaction_force(make_potential("double_well"), {1.0, 1.0}, {0.0, {0.0}, {2.0}});
  EXPECT_DOUBLE_EQ(r.magnitude, -3.0);
  EXPECT_TRUE(r.contact_lost);
}

TEST(MechanicalParams, MustBePositive) {
  EXPECT_THROW(validate(MechanicalParams{0.0, 1.0}), InputError);
  EXPECT_THROW(validate(MechanicalParams{1.0, -1.0}), InputError);
  EXPECT_NO_THROW(validate(MechanicalParams{}));
}

TEST(Energy, KineticPlusPotential) {
  EXPECT_DOUBLE_EQ(energy(kQuad, {0.0, {1.0, 0.0}, {0.0, 1.0}}), 1.0);
}

TEST(Energy, AtCriticalPointIsThePotential) {
  const auto p = make_potential("eggcrate");
  EXPECT_EQ(energy(p, {0.0, {0.0, 0.0}, {0.0, 0.0}}), p.value(Vec{0.0, 0.0}));
}

TEST(Energy, DoubleWellBottom) {
  EXPECT_DOUBLE_EQ(energy(make_potential("double_well"), {0.0, {1.0}, {0.0}}), -0.25);
}

TEST(Dissipation, Examples) {
  EXPECT_EQ(dissipation_rate(kOne, {0.0, {}, {0.0, 0.0}}), 0.0);
  const auto two = make_schedule("constant", params({{"lambda0", 2.0}}));
  EXPECT_DOUBLE_EQ(dissipation_rate(two, {0.0, {}, {1.0, 1.0}}), -4.0);
  EXPECT_DOUBLE_EQ(dissipation_rate(make_schedule("power_decay"), {3.0, {}, {2.0, 0.0}}), -1.0);
}

TEST(Dissipation, NegativeTimeIsInputError) {
  EXPECT_THROW(dissipation_rate(kOne, {-1.0, {}, {1.0}}), InputError);
}

TEST(DynamicsProperties, ShallowBowlDiscrepancyShrinksWithScale) {
  const PhaseState y{0.0, {0.8, -0.4}, {0.3, 0.2}};
  double previous = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const auto p = make_potential("quadratic", params({{"scale", eps}}));
    const auto full = full_surface_field(p, kOne, {1.0, 1.0}, y);
    const auto reduced = hbft_field(p, kOne, y);
    const double gap = std::hypot(full.dv[0] - reduced.dv[0], full.dv[1] - reduced.dv[1]);
    EXPECT_LT(gap, previous) << eps;
    previous = gap;
  }
}

TEST(ModelKind, RoundTrip) {
  for (auto k : {ModelKind::hbft, ModelKind::full_surface})
    EXPECT_EQ(parse_model_kind(to_string(k)), k);
  EXPECT_FALSE(parse_model_kind("newton").has_value());
}
