#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "monoflow/errors.hpp"
#include "monoflow/fem.hpp"
#include "monoflow/forcing.hpp"
#include "monoflow/io.hpp"

using namespace monoflow;

namespace {

const Grid kUnit = build_grid(0.0, 1.0, 4);

ForcingSpec linear_in_time() {
  return ForcingSpec::analytic([](double t, double) { return t; }, Smoothness::AC, 1, {}, "t");
}

void expect_constant(const ForcingField& f, double v, double tol = 1e-15) {
  for (double x : f.values) EXPECT_NEAR(x, v, tol);
}

}  // namespace

TEST(TimeGrid, Basics) {
  const auto tg = make_time_grid(1.0, 3);
  EXPECT_DOUBLE_EQ(tg.tau(), 1.0 / 3.0);
  EXPECT_EQ(tg.t(0), 0.0);
  EXPECT_EQ(tg.t(3), 1.0);
  EXPECT_THROW(make_time_grid(1.0, 0), InvalidInput);
  EXPECT_THROW(make_time_grid(-1.0, 4), InvalidInput);
}

TEST(IntervalAverage, LinearInTime) {
  expect_constant(interval_average(linear_in_time(), kUnit, 0.0, 0.5), 0.25);
  EXPECT_THROW(interval_average(linear_in_time(), kUnit, 0.5, 0.5), InvalidInput);
}

TEST(IntervalAverage, Autonomous) {
  const auto f = ForcingSpec::autonomous([](double x) { return x * x; }, "x^2");
  const auto avg = interval_average(f, kUnit, 0.1, 0.9);
  for (int i = 0; i <= kUnit.n_cells(); ++i) EXPECT_EQ(avg[static_cast<std::size_t>(i)], std::pow(kUnit.node(i), 2));
}

TEST(IntervalAverage, ProductOfTimeAndSpace) {
  const auto f = ForcingSpec::analytic([](double t, double x) { return t * x; }, Smoothness::AC, 1, {}, "tx");
  const auto avg = interval_average(f, kUnit, 0.0, 1.0);
  for (int i = 0; i <= kUnit.n_cells(); ++i) EXPECT_NEAR(avg[static_cast<std::size_t>(i)], 0.5 * kUnit.node(i), 1e-15);
}

TEST(IntervalAverage, GaussIsExactForDeclaredDegree) {
  const auto f = ForcingSpec::separable([](double t) { return t * t * t - 2.0 * t; }, [](double) { return 1.0; },
                                        Smoothness::AC, 3, "cubic");
  // mean over (0.2, 0.7) of t^3 - 2t
  const double a = 0.2, b = 0.7;
  const double exact = ((std::pow(b, 4) - std::pow(a, 4)) / 4.0 - (b * b - a * a)) / (b - a);
  expect_constant(interval_average(f, kUnit, a, b), exact, 1e-15);
}

TEST(IntervalAverage, BreakpointsSplitTheQuadrature) {
  const auto f = ForcingSpec::analytic([](double t, double) { return t <= 1.0 ? 2.0 * t : -1.0; }, Smoothness::L2, 1,
                                       {1.0}, "kink");
  // mean over (0.5, 1.5): (int_0.5^1 2t dt - 0.5) / 1 = 0.75 - 0.5
  expect_constant(interval_average(f, kUnit, 0.5, 1.5), 0.25, 1e-15);
}

TEST(IntervalAverage, MidpointFallbackIsAccurate) {
  const auto f = ForcingSpec::separable([](double t) { return std::exp(t); }, [](double) { return 1.0; },
                                        Smoothness::AC, std::nullopt, "exp");
  // composite midpoint error bound (b - a)^2 max|f''| / (24 panels^2)
  const double bound = 0.01 * std::exp(0.1) / (24.0 * ForcingSpec::kMidpointPanels * ForcingSpec::kMidpointPanels);
  expect_constant(interval_average(f, kUnit, 0.0, 0.1), (std::exp(0.1) - 1.0) / 0.1, bound);
}

TEST(BackwardInterpolant, MeansOfLinearForcing) {
  const auto seq = backward_interpolant(linear_in_time(), kUnit, make_time_grid(1.0, 2));
  ASSERT_EQ(seq.size(), 2u);
  expect_constant(seq[0], 0.25);
  expect_constant(seq[1], 0.75);
}

TEST(BackwardInterpolant, AutonomousIsConstant) {
  const auto f = ForcingSpec::autonomous([](double x) { return std::sin(x); }, "sin");
  const auto seq = backward_interpolant(f, kUnit, make_time_grid(2.0, 5));
  for (const auto& s : seq) EXPECT_EQ(s.values, seq.front().values);
}

TEST(BackwardInterpolant, SumsToTheTimeIntegral) {
  const auto f = ForcingSpec::separable([](double t) { return 1.0 + 3.0 * t * t; }, [](double x) { return x; },
                                        Smoothness::AC, 2, "quadratic");
  const auto tg = make_time_grid(1.5, 7);
  const auto seq = backward_interpolant(f, kUnit, tg);
  for (int i = 0; i <= kUnit.n_cells(); ++i) {
    double sum = 0.0;
    for (const auto& s : seq) sum += tg.tau() * s[static_cast<std::size_t>(i)];
    EXPECT_NEAR(sum, (1.5 + std::pow(1.5, 3)) * kUnit.node(i), 1e-12);
  }
}

TEST(DiscreteDifference, Basics) {
  const auto seq = backward_interpolant(linear_in_time(), kUnit, make_time_grid(1.0, 2));
  const auto d = discrete_time_difference(seq);
  ASSERT_EQ(d.size(), 1u);
  expect_constant(d[0], 0.5);
  EXPECT_THROW(discrete_time_difference({seq[0]}), InvalidInput);
  const auto c = discrete_time_difference({seq[0], seq[0], seq[0]});
  for (const auto& x : c) expect_constant(x, 0.0);
}

TEST(DiscreteDifference, TotalVariationMatchesDerivativeIntegral) {
  // f = t^2 x: sum of |fbar_{k+1} - fbar_k|_M approaches int |f_t|_M dt on [tau/2, T - tau/2].
  const Grid g = build_grid(0.0, 1.0, 16);
  const auto op = assemble(g, {});
  const auto f = ForcingSpec::separable([](double t) { return t * t; }, [](double x) { return x; }, Smoothness::AC, 2,
                                        "t^2 x");
  const auto tg = make_time_grid(1.0, 200);
  double tv = 0.0;
  for (const auto& d : discrete_time_difference(backward_interpolant(f, g, tg))) tv += mass_norm(op, d);
  const double x_norm = mass_norm(op, ForcingField::interpolate(g, [](double x) { return x; }));
  const double a = 0.5 * tg.tau(), b = 1.0 - 0.5 * tg.tau();
  EXPECT_NEAR(tv, (b * b - a * a) * x_norm, 1e-10);
}

TEST(Table, ConstantAndLinearInterpolation) {
  const Grid g = build_grid(0.0, 1.0, 2);
  const std::vector<double> times{0.0, 1.0};
  const std::vector<std::vector<double>> samples{{0.0, 0.0, 0.0}, {2.0, 2.0, 2.0}};
  const auto c = ForcingSpec::table(g, times, samples, ForcingSpec::TableInterpolation::Constant, Smoothness::L2, "c");
  const auto l = ForcingSpec::table(g, times, samples, ForcingSpec::TableInterpolation::Linear, Smoothness::AC, "l");
  expect_constant(c.at(g, 0.5), 0.0);
  expect_constant(l.at(g, 0.5), 1.0);
  expect_constant(interval_average(c, g, 0.5, 1.5), 1.0);
  expect_constant(interval_average(l, g, 0.0, 1.0), 1.0);
  expect_constant(interval_average(l, g, 0.5, 1.5), 1.75);
  EXPECT_THROW(ForcingSpec::table(g, {1.0, 0.0}, samples, ForcingSpec::TableInterpolation::Linear, Smoothness::L2, ""),
               InvalidInput);
  EXPECT_THROW(ForcingSpec::table(g, times, {{0.0}, {1.0}}, ForcingSpec::TableInterpolation::Linear, Smoothness::L2, ""),
               InvalidInput);
}

TEST(Table, LoadsFromCsv) {
  const auto path = (std::filesystem::temp_directory_path() / "monoflow_forcing_table.csv").string();
  write_text_file(path, "t,node_0,node_1,node_2\n0,1,1,1\n1,3,3,3\n");
  const Grid g = build_grid(0.0, 1.0, 2);
  const auto f = load_forcing_table(path, g, ForcingSpec::TableInterpolation::Linear);
  expect_constant(f.at(g, 0.25), 1.5);
  write_text_file(path, "t,node_0,node_1\n0,1,1\n");
  EXPECT_THROW(load_forcing_table(path, g, ForcingSpec::TableInterpolation::Linear), InvalidInput);
  std::filesystem::remove(path);
}

TEST(Offset, AddsSpatialPerturbation) {
  const auto f = linear_in_time().with_offset([](double x) { return x; }, 0.5);
  const auto avg = interval_average(f, kUnit, 0.0, 0.5);
  for (int i = 0; i <= kUnit.n_cells(); ++i) EXPECT_NEAR(avg[static_cast<std::size_t>(i)], 0.25 + 0.5 * kUnit.node(i), 1e-15);
  EXPECT_EQ(f.smoothness(), Smoothness::AC);
}
