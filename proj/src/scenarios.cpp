#include "monoflow/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "monoflow/errors.hpp"

namespace monoflow {

namespace {

double hat(double x) { return 1.0 - std::abs(x); }
double parabola(double x) { return x * (x - 1.0); }

Scenario hat_scenario(const std::string& name, int n_cells) {
  if (n_cells % 2 != 0) throw InvalidInput("hat scenario needs an even n_cells");
  const Grid g = build_grid(-1.0, 1.0, n_cells);
  Scenario s{name,
             "u0 = 1 - |x| on (-1, 1) with autonomous forcing f = u0",
             g,
             {},
             ForcingSpec::autonomous(hat, "u0"),
             NodalField::interpolate(g, hat),
             1.0,
             64,
             {{"E0", 1.0}, {"steady_slope_at_0", -2.0 / 3.0}},
             {},
             {}};
  if (name == "hat-spurious") {
    const auto u0 = s.u0;
    s.exact = [u0](double t) { return (1.0 + t) * u0; };
    s.exact_speed = [u0](double) { return u0; };
    s.reference["spurious_R_at_1"] = 3.0;
  }
  return s;
}

Scenario remark_auto(int n_cells) {
  const Grid g = build_grid(0.0, 1.0, n_cells);
  auto f = [](double t, double x) { return t <= 1.0 ? -parabola(x) - 2.0 * (1.0 - t) : parabola(x); };
  Scenario s{"remark-auto",
             "u0 = x(x - 1) with exact flow (1 - t) u0 on [0, 1] and 0 afterwards",
             g,
             {},
             ForcingSpec::analytic(f, Smoothness::L2, 1, {1.0}, "u_dot - u'' for t <= 1, u0 after"),
             NodalField::interpolate(g, parabola),
             2.0,
             64,
             {{"complementarity_at_1.5", 1.0 / 30.0}},
             {},
             {}};
  const auto u0 = s.u0;
  s.exact = [u0](double t) { return std::max(0.0, 1.0 - t) * u0; };
  s.exact_speed = [u0](double t) { return (t < 1.0 ? -1.0 : 0.0) * u0; };
  return s;
}

Scenario stationary(int n_cells) {
  const Grid g = build_grid(0.0, 1.0, n_cells);
  return {"stationary",
          "u0 = 0 with f = -1, a rest point of the constrained flow",
          g,
          {},
          ForcingSpec::autonomous([](double) { return -1.0; }, "-1"),
          NodalField(g),
          1.0,
          64,
          {},
          [g](double) { return NodalField(g); },
          [g](double) { return NodalField(g); }};
}

Scenario ac_smooth(int n_cells) {
  const Grid g = build_grid(0.0, 1.0, n_cells);
  return {"ac-smooth",
          "u0 = 0 with f = (1 + t) sin(pi x)",
          g,
          {},
          ForcingSpec::separable([](double t) { return 1.0 + t; },
                                 [](double x) { return std::sin(std::numbers::pi * x); }, Smoothness::AC, 1,
                                 "(1 + t) sin(pi x)"),
          NodalField(g),
          1.0,
          64,
          {},
          {},
          {}};
}

}  // namespace

std::vector<std::string> scenario_names() { return {"hat", "hat-spurious", "remark-auto", "stationary", "ac-smooth"}; }

std::string scenario_description(const std::string& name) { return make_scenario(name).description; }

Scenario make_scenario(const std::string& name, int n_cells) {
  if (n_cells < 0) throw InvalidInput("n_cells must be positive");
  if (name == "hat" || name == "hat-spurious") return hat_scenario(name, n_cells ? n_cells : 128);
  if (name == "remark-auto") return remark_auto(n_cells ? n_cells : 256);
  if (name == "stationary") return stationary(n_cells ? n_cells : 64);
  if (name == "ac-smooth") return ac_smooth(n_cells ? n_cells : 64);
  throw InvalidInput("unknown scenario '" + name + "'");
}

double hat_steady_profile(double x) {
  const double r = 1.0 - std::abs(x);
  return -r * r * r / 6.0 + 7.0 * r / 6.0;
}

Trajectory spurious_trajectory(const Scenario& s, const TimeGrid& tg) {
  const auto u0 = s.u0;
  return injected_trajectory(tg, [&u0](double t) { return (1.0 + t) * u0; });
}

Trajectory rescaled_trajectory(const DiscreteOperator& op, const Scenario& s, const TimeGrid& tg, int lambda,
                               const SchemeConfig& scheme) {
  if (lambda < 1) throw InvalidInput("rescaling factor must be a positive integer");
  const auto base = run(op, s.forcing, s.u0, make_time_grid(lambda * tg.T, lambda * tg.n_steps), scheme);
  std::vector<NodalField> states;
  for (int k = 0; k <= tg.n_steps; ++k) states.push_back(base.states[static_cast<std::size_t>(lambda * k)]);
  return injected_trajectory(tg, std::move(states));
}

NodalField initial_preset(const std::string& name, const Grid& grid) {
  const double a = grid.x_left(), b = grid.x_right(), mid = 0.5 * (a + b), half = 0.5 * (b - a);
  if (name == "zero") return NodalField(grid);
  if (name == "hat") return NodalField::interpolate(grid, [&](double x) { return 1.0 - std::abs(x - mid) / half; });
  if (name == "bubble") {
    return NodalField::interpolate(grid, [&](double x) { return (x - a) * (b - x) / (half * half); });
  }
  throw InvalidInput("unknown initial preset '" + name + "'");
}

}  // namespace monoflow
