#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "monoflow/errors.hpp"
#include "monoflow/fem.hpp"
#include "monoflow/step_solvers.hpp"
#include "../oracles.hpp"

using namespace monoflow;

namespace {

struct Instance {
  DiscreteOperator op;
  NodalField u_prev;
  ForcingField fbar;
  double tau;
};

Instance random_instance(std::mt19937_64& rng, int interior) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const CoefficientSpec c{Coefficient::affine(1.0 + 0.5 * std::abs(u(rng)), 0.3 * u(rng)),
                          Coefficient::constant(std::abs(u(rng)))};
  Instance in{assemble(build_grid(0.0, 1.0, interior + 1), c), {}, {}, 0.01 + 0.2 * std::abs(u(rng))};
  in.u_prev = NodalField(in.op.grid);
  in.fbar = ForcingField(in.op.grid);
  for (auto& x : in.u_prev.values) x = u(rng);
  for (auto& x : in.fbar.values) x = 20.0 * u(rng);
  return in;
}

std::vector<double> oracle_step(const Instance& in, const std::vector<double>& lower) {
  const auto sys = build_step_system(in.op, in.u_prev, in.fbar, in.tau, lower);
  const auto x = oracle::enumerate_lower_bounded(oracle::tridiag_to_dense(sys.matrix.diag, sys.matrix.off), sys.rhs,
                                                 lower, 1e-12);
  EXPECT_TRUE(x.has_value());
  return x.value_or(std::vector<double>{});
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double incremental_objective(const Instance& in, const NodalField& u) {
  const auto d = u - in.u_prev;
  double prox = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) prox += in.op.lumped[i] * d[i] * d[i];
  return free_energy(in.op, u, in.fbar) + prox / (2.0 * in.tau);
}

Instance single_node() {
  const auto op = assemble(build_grid(0.0, 1.0, 2), {});
  return {op, NodalField(op.grid), ForcingField::interpolate(op.grid, [](double) { return 1.0; }), 1.0};
}

const SolverConfig kCfg{};

}  // namespace

TEST(StepSystem, SingleNodeByHand) {
  const auto in = single_node();
  const auto sys = build_step_system(in.op, in.u_prev, in.fbar, in.tau, {0.0});
  EXPECT_DOUBLE_EQ(sys.matrix.diag[0], 4.5);
  EXPECT_DOUBLE_EQ(sys.rhs[0], 0.5);
  const auto r = step_constrained(in.op, in.u_prev, in.fbar, in.tau, kCfg);
  EXPECT_NEAR(r.u_next[0], 1.0 / 9.0, 1e-15);
  EXPECT_EQ(r.report.active_count, 0);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.kkt_tol = 0.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.sor_omega = 2.0;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = {};
  c.max_iter = 0;
  EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(Constrained, MatchesActiveSetEnumeration) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 12);
    const auto ref = oracle_step(in, in.u_prev.values);
    const auto r = step_constrained(in.op, in.u_prev, in.fbar, in.tau, kCfg);
    EXPECT_LE(max_abs_diff(r.u_next.values, ref), 1e-9) << trial;
  }
}

TEST(Constrained, ProjectedSorAgreesWithActiveSet) {
  std::mt19937_64 rng(5);
  SolverConfig sor;
  sor.method = InnerMethod::ProjectedSor;
  sor.max_iter = 20000;
  for (int trial = 0; trial < 40; ++trial) {
    const auto in = random_instance(rng, 2 + trial % 10);
    const auto a = step_constrained(in.op, in.u_prev, in.fbar, in.tau, kCfg);
    const auto b = step_constrained(in.op, in.u_prev, in.fbar, in.tau, sor);
    EXPECT_LE(max_abs_diff(a.u_next.values, b.u_next.values), 1e-8) << trial;
  }
}

TEST(Constrained, FullyActiveWhenResidualNonpositive) {
  const auto op = assemble(build_grid(0.0, 1.0, 16), {});
  const auto u_prev = NodalField::interpolate(op.grid, [](double x) { return x * (1.0 - x); });
  const auto f = ForcingField::interpolate(op.grid, [](double) { return -5.0; });
  const auto g = residual_representative(op, u_prev, f);
  ASSERT_LE(*std::max_element(g.values.begin(), g.values.end()), 0.0);
  const auto r = step_constrained(op, u_prev, f, 0.1, kCfg);
  EXPECT_EQ(r.u_next.values, u_prev.values);
  EXPECT_EQ(r.report.active_count, static_cast<int>(u_prev.size()));
  EXPECT_EQ(kkt_residual(op, u_prev, r.u_next, f, 0.1, u_prev.values), 0.0);
}

TEST(Constrained, InactiveConstraintEqualsUnconstrained) {
  const auto op = assemble(build_grid(0.0, 1.0, 16), {});
  const NodalField u_prev(op.grid);
  const auto f = ForcingField::interpolate(op.grid, [](double) { return 3.0; });
  const auto a = step_constrained(op, u_prev, f, 0.05, kCfg);
  const auto b = step_unconstrained(op, u_prev, f, 0.05, kCfg);
  EXPECT_LE(max_abs_diff(a.u_next.values, b.u_next.values), 1e-14);
  EXPECT_EQ(a.report.active_count, 0);
}

TEST(Constrained, MonotoneComplementaryAndSlopeIdentity) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 30);
    const auto r = step_constrained(in.op, in.u_prev, in.fbar, in.tau, kCfg);
    const auto speed = (1.0 / in.tau) * (r.u_next - in.u_prev);
    const auto g = residual_representative(in.op, r.u_next, in.fbar);
    double scale = 1.0;
    for (double x : g.values) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < speed.size(); ++i) {
      EXPECT_GE(r.u_next[i], in.u_prev[i]);
      EXPECT_NEAR(speed[i], std::max(g[i], 0.0), 10.0 * kCfg.kkt_tol * scale / in.tau);
      EXPECT_GE(r.multiplier[i], -1e-12 * scale);
    }
    EXPECT_NEAR(r.report.speed_norm, unilateral_slope(in.op, r.u_next, in.fbar), 1e-8 * scale);
    EXPECT_LE(r.report.kkt_residual, kCfg.kkt_tol);
  }
}

TEST(Constrained, ObjectiveDoesNotIncrease) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 20);
    const auto r = step_constrained(in.op, in.u_prev, in.fbar, in.tau, kCfg);
    const double before = incremental_objective(in, in.u_prev), after = incremental_objective(in, r.u_next);
    if (r.u_next.values == in.u_prev.values) {
      EXPECT_EQ(after, before);
    } else {
      EXPECT_LT(after, before);
    }
  }
}

TEST(Constrained, NonConvergenceCarriesBestIterate) {
  std::mt19937_64 rng(1);
  const auto in = random_instance(rng, 30);
  SolverConfig c;
  c.method = InnerMethod::ProjectedSor;
  c.max_iter = 1;
  try {
    step_constrained(in.op, in.u_prev, in.fbar, in.tau, c);
    FAIL();
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.best_iterate().size(), in.u_prev.size());
    EXPECT_GT(e.residual(), c.kkt_tol);
  }
}

TEST(Truncation, CasesAndIdentity) {
  const auto op = assemble(build_grid(0.0, 1.0, 16), {});
  const NodalField zero(op.grid);
  const auto up = ForcingField::interpolate(op.grid, [](double) { return 3.0; });
  const auto down = ForcingField::interpolate(op.grid, [](double) { return -3.0; });

  const auto a = step_truncation(op, zero, up, 0.05, kCfg);
  EXPECT_EQ(a.u_next.values, step_unconstrained(op, zero, up, 0.05, kCfg).u_next.values);
  const auto b = step_truncation(op, zero, down, 0.05, kCfg);
  EXPECT_EQ(b.u_next.values, zero.values);
  ASSERT_TRUE(b.u_tilde.has_value());
  EXPECT_LT(b.u_tilde->values[7], 0.0);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 25);
    const auto r = step_truncation(in.op, in.u_prev, in.fbar, in.tau, kCfg);
    for (std::size_t i = 0; i < r.u_next.size(); ++i) {
      EXPECT_EQ(r.u_next[i], std::max(r.u_tilde->values[i], in.u_prev[i]));
    }
    const double lhs = lumped_norm(in.op, r.u_next - in.u_prev) / in.tau;
    const double rhs = unilateral_slope(in.op, *r.u_tilde, in.fbar);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, rhs));
  }
}

TEST(Penalty, UnitWeightIsTheUnconstrainedSolve) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 20);
    const auto p = step_penalty(in.op, in.u_prev, in.fbar, in.tau, 1.0, kCfg);
    const auto t = step_truncation(in.op, in.u_prev, in.fbar, in.tau, kCfg);
    EXPECT_LE(max_abs_diff(p.u_next.values, t.u_tilde->values), 1e-12);
  }
}

TEST(Penalty, LargeWeightApproachesConstrained) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 12);
    const auto p = step_penalty(in.op, in.u_prev, in.fbar, in.tau, 1e10, kCfg);
    const auto c = step_constrained(in.op, in.u_prev, in.fbar, in.tau, kCfg);
    double norm = 0.0;
    for (double x : c.u_next.values) norm = std::max(norm, std::abs(x));
    EXPECT_LE(max_abs_diff(p.u_next.values, c.u_next.values), 1e-4 * norm);
  }
}

TEST(Penalty, ViolationShrinksWithWeight) {
  const auto op = assemble(build_grid(0.0, 1.0, 16), {});
  const auto u_prev = NodalField::interpolate(op.grid, [](double x) { return std::sin(3.14159 * x); });
  const auto f = ForcingField::interpolate(op.grid, [](double x) { return x < 0.5 ? -8.0 : 8.0; });
  double prev = 0.0;
  for (double alpha : {1e2, 1e3, 1e4}) {
    const auto r = step_penalty(op, u_prev, f, 0.05, alpha, kCfg);
    const double violation = -r.report.min_increment;
    ASSERT_GT(violation, 0.0);
    if (prev > 0.0) EXPECT_LE(violation, prev / 2.0);
    prev = violation;
  }
}

TEST(Penalty, SlopeIdentityAndGuards) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 20);
    for (double alpha : {1.0, 10.0, 1e4}) {
      const auto r = step_penalty(in.op, in.u_prev, in.fbar, in.tau, alpha, kCfg);
      const auto speed = (1.0 / in.tau) * (r.u_next - in.u_prev);
      const double lhs = std::pow(penalty_norm(speed, in.op, alpha), 2);
      const auto load = load_vector(in.op, in.fbar);
      const auto ku = multiply(in.op.stiffness, r.u_next.values);
      double descent = 0.0;
      for (std::size_t i = 0; i < speed.size(); ++i) descent += (load[i] - ku[i]) * speed[i];
      EXPECT_NEAR(lhs, descent, 1e-7 * std::max(1.0, lhs));
    }
  }
  const auto in = single_node();
  EXPECT_THROW(step_penalty(in.op, in.u_prev, in.fbar, in.tau, 0.5, kCfg), InvalidInput);
  EXPECT_THROW(step_penalty(in.op, in.u_prev, in.fbar, in.tau, 2e12, kCfg), InvalidInput);
}

TEST(FixedObstacle, FloorAtPreviousStateIsConstrained) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 12);
    const auto a = step_fixed_obstacle(in.op, in.u_prev, in.fbar, in.tau, in.u_prev, kCfg);
    const auto b = step_constrained(in.op, in.u_prev, in.fbar, in.tau, kCfg);
    EXPECT_EQ(a.u_next.values, b.u_next.values);
  }
}

TEST(FixedObstacle, FarFloorIsUnconstrained) {
  std::mt19937_64 rng(53);
  const auto in = random_instance(rng, 10);
  NodalField floor(in.op.grid);
  for (auto& x : floor.values) x = -1e6;
  const auto a = step_fixed_obstacle(in.op, in.u_prev, in.fbar, in.tau, floor, kCfg);
  const auto b = step_unconstrained(in.op, in.u_prev, in.fbar, in.tau, kCfg);
  EXPECT_LE(max_abs_diff(a.u_next.values, b.u_next.values), 1e-12);
}

TEST(FixedObstacle, MatchesEnumerationBelowPreviousState) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random_instance(rng, 1 + trial % 12);
    NodalField floor = in.u_prev;
    for (auto& x : floor.values) x -= u(rng);
    const auto ref = oracle_step(in, floor.values);
    const auto r = step_fixed_obstacle(in.op, in.u_prev, in.fbar, in.tau, floor, kCfg);
    EXPECT_LE(max_abs_diff(r.u_next.values, ref), 1e-9) << trial;
  }
}

TEST(FixedObstacle, InfeasiblePreviousState) {
  const auto in = single_node();
  const NodalField floor(in.op.grid, {1.0});
  EXPECT_THROW(step_fixed_obstacle(in.op, in.u_prev, in.fbar, in.tau, floor, kCfg), InvalidInput);
}

TEST(KktResidual, DetectsPerturbation) {
  const auto op = assemble(build_grid(0.0, 1.0, 16), {});
  const NodalField u_prev(op.grid);
  const auto f = ForcingField::interpolate(op.grid, [](double) { return 3.0; });
  const double tau = 0.05;
  auto r = step_constrained(op, u_prev, f, tau, kCfg);
  EXPECT_LE(kkt_residual(op, u_prev, r.u_next, f, tau, u_prev.values), kCfg.kkt_tol);
  const auto sys = build_step_system(op, u_prev, f, tau, u_prev.values);
  double scale = 0.0;
  for (std::size_t i = 0; i < sys.rhs.size(); ++i) {
    scale = std::max({scale, std::abs(sys.rhs[i]), sys.matrix.diag[i] * std::abs(r.u_next[i])});
  }
  r.u_next[7] += 1e-3;
  EXPECT_GE(kkt_residual(op, u_prev, r.u_next, f, tau, u_prev.values), 0.5 * sys.matrix.diag[7] * 1e-3 / scale);
}
