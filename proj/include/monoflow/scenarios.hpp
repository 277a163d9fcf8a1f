#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monoflow/coefficients.hpp"
#include "monoflow/evolution.hpp"
#include "monoflow/forcing.hpp"
#include "monoflow/grid.hpp"

namespace monoflow {

struct Scenario {
  std::string name;
  std::string description;
  Grid grid;
  CoefficientSpec coefficients;
  ForcingSpec forcing;
  NodalField u0;
  double T = 1.0;
  int n_steps = 64;
  /// Closed-form reference values keyed by name.
  std::map<std::string, double> reference;
  /// Exact trajectory and its time derivative, when known.
  std::function<NodalField(double)> exact;
  std::function<NodalField(double)> exact_speed;
};

std::vector<std::string> scenario_names();
std::string scenario_description(const std::string& name);

/// Builds a catalog scenario. n_cells = 0 selects the scenario default.
/// Throws InvalidInput for an unknown name or an odd n_cells on "hat".
Scenario make_scenario(const std::string& name, int n_cells = 0);

/// u_min(x) = -(1 - x)^3 / 6 + 7 (1 - x) / 6 on [0, 1], extended evenly to [-1, 1].
double hat_steady_profile(double x);

/// Samples (1 + t) u0 on the time grid.
Trajectory spurious_trajectory(const Scenario& s, const TimeGrid& tg);

/// u(lambda t) from a run of `scheme` over [0, lambda T] with lambda n steps.
Trajectory rescaled_trajectory(const DiscreteOperator& op, const Scenario& s, const TimeGrid& tg, int lambda,
                               const SchemeConfig& scheme);

/// Named initial data: "zero", "hat" (1 at the midpoint, 0 at the ends) and
/// "bubble" ((x - a)(b - x) scaled to height 1).
NodalField initial_preset(const std::string& name, const Grid& grid);

}  // namespace monoflow
