#include <gtest/gtest.h>

#include <cmath>

#include "core/dynamics.hpp"
#include "core/error.hpp"
#include "core/integrate.hpp"
#include "support.hpp"

using namespace hbft;
using hbft::test::DampedHarmonic;
using hbft::test::params;

namespace {

const Potential kQuad1 = make_potential("quadratic", params({{"dim", 1.0}}));
const FrictionSchedule kOne = make_schedule("constant");
const FrictionSchedule kZero = make_schedule("constant", params({{"lambda0", 0.0}}));

Trajectory damped(const IntegratorConfig& cfg) {
  return integrate(make_hbft_field(kQuad1, kOne), kQuad1, kOne, {0.0, {1.0}, {0.0}}, cfg);
}

double max_error(const Trajectory& traj) {
  double err = 0.0;
  for (const auto& s : traj.samples) err = std::max(err, std::abs(s.x[0] - DampedHarmonic::x(s.t)));
  return err;
}

double final_error(const Trajectory& traj) {
  const auto& s = traj.samples.back();
  return std::hypot(s.x[0] - DampedHarmonic::x(s.t), s.v[0] - DampedHarmonic::v(s.t));
}

}  // namespace

TEST(StepRk4, ZeroFieldOnlyAdvancesTime) {
  const auto flat = make_potential("flat");
  const PhaseState y{0.25, {0.5, -1.0}, {0.0, 0.0}};
  const PhaseState next = step_rk4(make_hbft_field(flat, kZero), y, 0.01);
  EXPECT_EQ(next.x, y.x);
  EXPECT_EQ(next.v, y.v);
  EXPECT_EQ(next.t, 0.25 + 0.01);
}

TEST(StepRk4, UndampedHarmonicOneStep) {
  const double h = 0.01;
  const auto next = step_rk4(make_hbft_field(kQuad1, kZero), {0.0, {1.0}, {0.0}}, h);
  EXPECT_NEAR(next.x[0], std::cos(h), 1e-10);
  EXPECT_NEAR(next.v[0], -std::sin(h), 1e-10);
}

TEST(StepRk4, PureDampingOneStep) {
  const auto flat = make_potential("flat", params({{"dim", 1.0}}));
  const double h = 0.01;
  const auto next = step_rk4(make_hbft_field(flat, kOne), {0.0, {0.0}, {1.0}}, h);
  EXPECT_NEAR(next.v[0], std::exp(-h), 1e-10);
  EXPECT_NEAR(next.x[0], 1.0 - std::exp(-h), 1e-10);
}

TEST(StepRk4, RejectsBadStepAndNonFiniteResult) {
  const auto field = make_hbft_field(kQuad1, kOne);
  EXPECT_THROW(step_rk4(field, {0.0, {1.0}, {0.0}}, 0.0), InputError);
  const VectorField blowup(ModelKind::hbft, 1, [](const PhaseState&) {
    return StateDerivative{{INFINITY}, {0.0}};
  });
  EXPECT_THROW(step_rk4(blowup, {0.0, {1.0}, {0.0}}, 0.1), DivergenceError);
}

TEST(Integrate, DampedHarmonicMatchesClosedForm) {
  const auto traj = damped(hbft::test::rk4(1e-3, 10.0));
  EXPECT_EQ(traj.termination, Termination::t_max);
  EXPECT_EQ(traj.t_final(), 10.0);
  EXPECT_LE(max_error(traj), 1e-6);
}

TEST(Integrate, FourthOrderConvergence) {
  const double e1 = final_error(damped(hbft::test::rk4(0.1, 10.0)));
  const double e2 = final_error(damped(hbft::test::rk4(0.05, 10.0)));
  const double e3 = final_error(damped(hbft::test::rk4(0.025, 10.0)));
  EXPECT_GE(e1 / e2, 8.0);
  EXPECT_LE(e1 / e2, 32.0);
  EXPECT_GE(e2 / e3, 8.0);
  EXPECT_LE(e2 / e3, 32.0);
}

TEST(Integrate, AdaptiveAgreesWithFixedStep) {
  IntegratorConfig cfg;
  cfg.t_max = 10.0;
  cfg.stop.dwell = 100.0;
  const auto adaptive = damped(cfg);
  EXPECT_GT(adaptive.stats.accepted, 0u);
  EXPECT_LE(max_error(adaptive), 10.0 * cfg.abs_tol);
}

TEST(Integrate, EquilibriumBecomesStationary) {
  const auto dw = make_potential("double_well");
  for (auto method : {Method::rk4, Method::dopri45}) {
    IntegratorConfig cfg;
    cfg.method = method;
    cfg.t_max = 10.0;
    const auto traj = integrate(make_hbft_field(dw, kOne), dw, kOne, {0.0, {1.0}, {0.0}}, cfg);
    EXPECT_EQ(traj.termination, Termination::stationary);
    EXPECT_NEAR(traj.t_final(), cfg.stop.dwell, 0.2);
    for (const auto& s : traj.samples) EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  }
}

TEST(Integrate, FreeMotionDiverges) {
  const auto flat = make_potential("flat");
  IntegratorConfig cfg;
  cfg.t_max = 100.0;
  cfg.stop.divergence_radius = 10.0;
  const auto traj =
      integrate(make_hbft_field(flat, kZero), flat, kZero, {0.0, {0.0, 0.0}, {1.0, 0.0}}, cfg);
  EXPECT_EQ(traj.termination, Termination::diverged);
  EXPECT_NEAR(traj.t_final(), 10.0, 0.2);
}

TEST(Integrate, SamplesAreOrderedAndCarryConsistentEnergy) {
  const auto p = make_potential("eggcrate");
  const auto s = make_schedule("oscillating");
  IntegratorConfig cfg;
  cfg.t_max = 5.0;
  const auto traj = integrate(make_hbft_field(p, s), p, s, {0.0, {1.5, -1.0}, {0.0, 0.5}}, cfg);
  ASSERT_GE(traj.samples.size(), 2u);
  EXPECT_EQ(traj.samples.front().t, 0.0);
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& r = traj.samples[k];
    if (k > 0) EXPECT_GT(r.t, traj.samples[k - 1].t);
    EXPECT_NEAR(r.energy, energy(p, {r.t, r.x, r.v}), 1e-12);
    EXPECT_NEAR(r.lambda, s.lambda_at(r.t), 1e-15);
    EXPECT_NEAR(r.dissipation, -r.lambda * dot(r.v, r.v), 1e-15);
  }
}

TEST(Integrate, StrideThinsButKeepsTheFinalState) {
  auto cfg = hbft::test::rk4(0.01, 1.005);
  cfg.sample_stride = 10;
  const auto traj = damped(cfg);
  EXPECT_EQ(traj.samples.front().t, 0.0);
  EXPECT_EQ(traj.t_final(), 1.005);
  // 101 steps (last one shortened): t = 0, 0.1, ..., 1.0, then the end point.
  EXPECT_EQ(traj.samples.size(), 12u);
  EXPECT_NEAR(traj.samples[1].t, 0.1, 1e-12);
}

TEST(Integrate, SampleDtPicksNearestAcceptedSteps) {
  auto cfg = hbft::test::rk4(0.01, 2.0);
  cfg.sample_dt = 0.25;
  const auto traj = damped(cfg);
  EXPECT_EQ(traj.samples.size(), 9u);
  for (std::size_t k = 0; k < traj.samples.size(); ++k)
    EXPECT_NEAR(traj.samples[k].t, 0.25 * static_cast<double>(k), 1e-9);
}

TEST(Integrate, LongFixedStepRunLandsOnTmax) {
  const auto traj = damped(hbft::test::rk4(1e-3, 100.0));
  EXPECT_EQ(traj.t_final(), 100.0);
  EXPECT_EQ(traj.stats.accepted, 100000u);
  // compensated time accumulation keeps every sample on the grid
  EXPECT_NEAR(traj.samples[77777].t, 77.777, 1e-12);
}

TEST(Integrate, StepUnderflowCarriesPartialTrajectory) {
  const auto stiff = make_schedule("constant", params({{"lambda0", 1e7}}));
  IntegratorConfig cfg;
  cfg.h_min = 1e-3;
  cfg.t_max = 1.0;
  try {
    integrate(make_hbft_field(kQuad1, stiff), kQuad1, stiff, {0.0, {1.0}, {1.0}}, cfg);
    FAIL() << "expected StepUnderflowError";
  } catch (const StepUnderflowError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::integration);
    EXPECT_FALSE(e.partial().samples.empty());
    EXPECT_EQ(e.partial().samples.front().t, 0.0);
  }
}

TEST(Integrate, ContactLossHaltsWhenAsked) {
  const auto dw = make_potential("double_well");
  IntegratorConfig cfg;
  cfg.t_max = 1.0;
  cfg.stop.halt_on_contact_loss = true;
  const auto field = make_full_surface_field(dw, kOne, {1.0, 1.0});
  const auto traj = integrate(field, dw, kOne, {0.0, {0.0}, {2.0}}, cfg);
  EXPECT_EQ(traj.termination, Termination::contact_lost);
  ASSERT_TRUE(traj.first_contact_loss_t.has_value());
  EXPECT_GT(traj.contact_loss_steps, 0u);

  cfg.stop.halt_on_contact_loss = false;
  const auto cont = integrate(field, dw, kOne, {0.0, {0.0}, {2.0}}, cfg);
  EXPECT_EQ(cont.termination, Termination::t_max);
  EXPECT_GT(cont.contact_loss_steps, 0u);
}

TEST(Integrate, RejectsInvalidInput) {
  const auto field = make_hbft_field(kQuad1, kOne);
  IntegratorConfig cfg;
  EXPECT_THROW(integrate(field, kQuad1, kOne, {1.0, {1.0}, {0.0}}, cfg), InputError);
  EXPECT_THROW(integrate(field, kQuad1, kOne, {0.0, {1.0, 2.0}, {0.0, 0.0}}, cfg), InputError);
  EXPECT_THROW(integrate(field, kQuad1, kOne, {0.0, {NAN}, {0.0}}, cfg), InputError);
  cfg.t_max = -1.0;
  EXPECT_THROW(integrate(field, kQuad1, kOne, {0.0, {1.0}, {0.0}}, cfg), InputError);
}

TEST(IntegratorConfig, Validation) {
  IntegratorConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.abs_tol = 0.0;
  EXPECT_THROW(validate(cfg), InputError);
  cfg = {};
  cfg.h_min = 1.0;
  EXPECT_THROW(validate(cfg), InputError);
  cfg = {};
  cfg.sample_stride = 0;
  EXPECT_THROW(validate(cfg), InputError);
  cfg = {};
  cfg.stop.dwell = 0.0;
  EXPECT_THROW(validate(cfg), InputError);
  EXPECT_EQ(parse_method("rk4"), Method::rk4);
  EXPECT_EQ(parse_method("dopri45"), Method::dopri45);
  EXPECT_FALSE(parse_method("euler").has_value());
}

TEST(IntegrateProperties, EnergyNeverRisesAtDefaultTolerances) {
  struct Case {
    Potential p;
    FrictionSchedule s;
    Vec x0, v0;
  };
  const std::vector<Case> cases = {
      {make_potential("quadratic"), make_schedule("oscillating"), {1.0, -1.0}, {0.5, 0.0}},
      {make_potential("eggcrate"), make_schedule("power_decay"), {1.8, 0.4}, {-1.0, 1.0}},
      {make_potential("rosenbrock"), make_schedule("constant"), {-1.2, 1.0}, {0.0, 0.0}},
      {make_potential("double_well"), make_schedule("constant", params({{"lambda0", 0.3}})),
       {2.0}, {0.0}},
  };
  for (const auto& c : cases) {
    IntegratorConfig cfg;
    cfg.t_max = 20.0;
    const auto traj = integrate(make_hbft_field(c.p, c.s), c.p, c.s, {0.0, c.x0, c.v0}, cfg);
    for (std::size_t k = 1; k < traj.samples.size(); ++k)
      ASSERT_LE(traj.samples[k].energy, traj.samples[k - 1].energy + 1e-8) << c.p.name();
  }
}

TEST(IntegrateProperties, VelocityBoundHoldsAtEverySample) {
  const auto p = make_potential("eggcrate");
  const auto s = make_schedule("power_decay", params({{"alpha", 2.0}}));
  const Vec x0{1.7, -1.3}, v0{2.0, 0.5};
  IntegratorConfig cfg;
  cfg.t_max = 30.0;
  const auto traj = integrate(make_hbft_field(p, s), p, s, {0.0, x0, v0}, cfg);
  const double budget = 0.5 * dot(v0, v0) + p.value(x0) - *p.lower_bound();
  for (const auto& r : traj.samples) ASSERT_LE(0.5 * dot(r.v, r.v), budget + 1e-8);
}

TEST(IntegrateProperties, Deterministic) {
  IntegratorConfig cfg;
  cfg.t_max = 5.0;
  const auto a = damped(cfg);
  const auto b = damped(cfg);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    EXPECT_EQ(a.samples[k].t, b.samples[k].t);
    EXPECT_EQ(a.samples[k].x, b.samples[k].x);
  }
}
