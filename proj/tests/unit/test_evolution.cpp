#include <gtest/gtest.h>

#include <cmath>

#include "monoflow/errors.hpp"
#include "monoflow/evolution.hpp"
#include "monoflow/scenarios.hpp"

using namespace monoflow;

namespace {

SchemeConfig scheme(SchemeKind k) {
  SchemeConfig s;
  s.kind = k;
  return s;
}

Trajectory run_scenario(const Scenario& s, SchemeKind k, int n_steps) {
  const auto op = assemble(s.grid, s.coefficients);
  return run(op, s.forcing, s.u0, make_time_grid(s.T, n_steps), scheme(k));
}

}  // namespace

TEST(Scheme, ParseKinds) {
  for (auto k : {SchemeKind::Constrained, SchemeKind::Truncation, SchemeKind::Penalty, SchemeKind::FixedObstacle,
                 SchemeKind::Unconstrained}) {
    EXPECT_EQ(parse_scheme_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_scheme_kind("explicit"), InvalidInput);
}

TEST(AlphaSchedule, Parse) {
  EXPECT_DOUBLE_EQ(AlphaSchedule::parse("inverse_tau")(0.01), 100.0);
  EXPECT_DOUBLE_EQ(AlphaSchedule::parse("power:2")(0.1), 100.0);
  EXPECT_DOUBLE_EQ(AlphaSchedule::parse("power:1,5")(0.5), 10.0);
  EXPECT_DOUBLE_EQ(AlphaSchedule::parse("constant:7")(0.5), 7.0);
  EXPECT_THROW(AlphaSchedule::parse("constant:0.1"), InvalidInput);
  EXPECT_THROW(AlphaSchedule::parse("exp:2"), InvalidInput);
  const auto s = AlphaSchedule::power(1.5);
  double prev = 0.0;
  for (double tau : {0.5, 0.1, 0.01, 0.001}) {
    EXPECT_GE(s(tau), prev);
    prev = s(tau);
  }
}

TEST(Run, StationaryIsConstant) {
  const auto s = make_scenario("stationary");
  const auto traj = run_scenario(s, SchemeKind::Constrained, s.n_steps);
  ASSERT_EQ(traj.states.size(), static_cast<std::size_t>(s.n_steps) + 1);
  for (const auto& u : traj.states) EXPECT_EQ(u.values, s.u0.values);
  for (const auto& r : traj.steps) EXPECT_EQ(r.speed_norm, 0.0);
}

TEST(Run, SingleStepEqualsStepCall) {
  const auto s = make_scenario("hat", 32);
  const auto op = assemble(s.grid, s.coefficients);
  const auto tg = make_time_grid(0.25, 1);
  const auto fbar = backward_interpolant(s.forcing, s.grid, tg);
  const SolverConfig cfg;
  EXPECT_EQ(run(op, s.forcing, s.u0, tg, scheme(SchemeKind::Constrained)).states[1].values,
            step_constrained(op, s.u0, fbar[0], 0.25, cfg).u_next.values);
  EXPECT_EQ(run(op, s.forcing, s.u0, tg, scheme(SchemeKind::Truncation)).states[1].values,
            step_truncation(op, s.u0, fbar[0], 0.25, cfg).u_next.values);
  EXPECT_EQ(run(op, s.forcing, s.u0, tg, scheme(SchemeKind::Penalty)).states[1].values,
            step_penalty(op, s.u0, fbar[0], 0.25, 4.0, cfg).u_next.values);
}

TEST(Run, HatFlowIsMonotoneAndBelowSteadyProfile) {
  const auto s = make_scenario("hat", 64);
  for (auto k : {SchemeKind::Constrained, SchemeKind::Truncation}) {
    const auto traj = run_scenario(s, k, 128);
    for (std::size_t j = 0; j + 1 < traj.states.size(); ++j) {
      for (std::size_t i = 0; i < s.u0.size(); ++i) EXPECT_GE(traj.states[j + 1][i], traj.states[j][i]);
    }
    for (std::size_t i = 0; i < s.u0.size(); ++i) {
      EXPECT_LE(traj.states.back()[i], hat_steady_profile(s.grid.interior_node(i)) + 1e-12);
    }
    for (const auto& r : traj.steps) EXPECT_LE(r.kkt_residual, 1e-10);
  }
}

TEST(Run, PenaltyRecordsMinimumIncrement) {
  const auto s = make_scenario("hat", 32);
  const auto traj = run_scenario(s, SchemeKind::Penalty, 32);
  EXPECT_DOUBLE_EQ(traj.alpha, 32.0);
  double m = INFINITY;
  for (const auto& r : traj.steps) m = std::min(m, r.min_increment);
  EXPECT_EQ(traj.min_increment, m);
}

TEST(Run, StepEnergyIdentity) {
  for (const char* name : {"hat", "ac-smooth", "remark-auto"}) {
    const auto s = make_scenario(name, 32);
    const auto op = assemble(s.grid, s.coefficients);
    const auto tg = make_time_grid(s.T, 40);
    const auto traj = run(op, s.forcing, s.u0, tg, scheme(SchemeKind::Constrained));
    for (int k = 0; k < tg.n_steps; ++k) {
      const auto v = discrete_speed(traj, k);
      const double tau = tg.tau();
      const auto& r = traj.steps[static_cast<std::size_t>(k)];
      const double lhs = stored_energy(op, traj.states[k + 1]) - stored_energy(op, traj.states[k]) +
                         tau * std::pow(lumped_norm(op, v), 2) - r.power_term;
      const double rhs = -0.5 * tau * tau * quadratic_form(op.stiffness, v.values);
      EXPECT_NEAR(lhs, rhs, 100.0 * 1e-10 * std::max(1.0, stored_energy(op, traj.states[k + 1]))) << name << k;
      EXPECT_LE(rhs, 0.0);
    }
  }
}

TEST(Run, DiscreteSpeedBound) {
  const auto s = make_scenario("ac-smooth", 32);
  const auto op = assemble(s.grid, s.coefficients);
  const auto tg = make_time_grid(s.T, 64);
  const auto traj = run(op, s.forcing, s.u0, tg, scheme(SchemeKind::Constrained));
  const auto diffs = discrete_time_difference(backward_interpolant(s.forcing, s.grid, tg));
  for (int k = 1; k < tg.n_steps; ++k) {
    const double a_prev = lumped_norm(op, discrete_speed(traj, k - 1));
    const double a = lumped_norm(op, discrete_speed(traj, k));
    EXPECT_LE(a, a_prev + 2.0 * mass_norm(op, diffs[static_cast<std::size_t>(k - 1)]) + 1e-9) << k;
  }
}

TEST(Run, FailureCarriesStepIndex) {
  const auto s = make_scenario("hat", 32);
  auto sc = scheme(SchemeKind::Constrained);
  sc.solver.method = InnerMethod::ProjectedSor;
  sc.solver.max_iter = 1;
  try {
    run(assemble(s.grid, s.coefficients), s.forcing, s.u0, make_time_grid(1.0, 8), sc);
    FAIL();
  } catch (const StepFailure& e) {
    EXPECT_EQ(e.step(), 0);
    EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos);
  }
}

TEST(Interpolants, Affine) {
  const Grid g = build_grid(0.0, 1.0, 2);
  const auto traj = injected_trajectory(make_time_grid(1.0, 2), {NodalField(g, {0.0}), NodalField(g, {1.0}),
                                                                   NodalField(g, {3.0})});
  EXPECT_EQ(eval_affine(traj, 0.5)[0], 1.0);
  EXPECT_EQ(eval_affine(traj, 0.25)[0], 0.5);
  EXPECT_EQ(eval_affine(traj, 0.75)[0], 2.0);
  EXPECT_EQ(eval_affine(traj, 1.0)[0], 3.0);
  EXPECT_THROW(eval_affine(traj, 1.5), InvalidInput);
  EXPECT_THROW(eval_affine(traj, -0.1), InvalidInput);
}

TEST(Interpolants, Backward) {
  const Grid g = build_grid(0.0, 1.0, 2);
  const auto traj = injected_trajectory(make_time_grid(1.0, 2), {NodalField(g, {0.0}), NodalField(g, {1.0}),
                                                                   NodalField(g, {3.0})});
  EXPECT_EQ(eval_backward(traj, 0.0)[0], 0.0);
  EXPECT_EQ(eval_backward(traj, 0.5)[0], 1.0);
  EXPECT_EQ(eval_backward(traj, 0.5 + 1e-9)[0], 3.0);
  EXPECT_EQ(eval_backward(traj, 0.1)[0], 1.0);
  EXPECT_THROW(eval_backward(traj, 1.1), InvalidInput);
}

TEST(Interpolants, ConstantTrajectory) {
  const auto s = make_scenario("stationary", 16);
  const auto traj = run_scenario(s, SchemeKind::Constrained, 10);
  for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) {
    EXPECT_EQ(eval_affine(traj, t).values, s.u0.values);
    EXPECT_EQ(eval_backward(traj, t).values, s.u0.values);
  }
}

TEST(Injected, FromFunction) {
  const auto s = make_scenario("remark-auto", 64);
  const auto traj = injected_trajectory(make_time_grid(2.0, 4), s.exact);
  ASSERT_EQ(traj.states.size(), 5u);
  EXPECT_FALSE(traj.scheme_produced);
  for (double x : traj.states[2].values) EXPECT_NEAR(x, 0.0, 1e-15);
  const auto v = discrete_speed(traj, 0);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], -s.u0[i], 1e-14);
  for (double x : v.values) EXPECT_GE(x, 0.0);
}
