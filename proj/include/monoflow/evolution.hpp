#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monoflow/fem.hpp"
#include "monoflow/forcing.hpp"
#include "monoflow/grid.hpp"
#include "monoflow/step_solvers.hpp"

namespace monoflow {

enum class SchemeKind { Constrained, Truncation, Penalty, FixedObstacle, Unconstrained };

std::string to_string(SchemeKind k);
/// Accepts "constrained", "truncation", "penalty", "fixed_obstacle", "unconstrained".
SchemeKind parse_scheme_kind(const std::string& text);

/// Penalty weight as a function of the time step.
struct AlphaSchedule {
  std::function<double(double)> eval;
  std::string description;

  /// Evaluates and clamps below at 1.
  double operator()(double tau) const;

  /// alpha = c * tau^(-p); "inverse_tau" is power p = 1.
  static AlphaSchedule power(double p, double c = 1.0);
  static AlphaSchedule constant(double alpha);
  /// Parses "inverse_tau", "power:p", "power:p,c" or "constant:a".
  static AlphaSchedule parse(const std::string& text);
};

struct SchemeConfig {
  SchemeKind kind = SchemeKind::Constrained;
  AlphaSchedule alpha_schedule = AlphaSchedule::power(1.0);
  SolverConfig solver;
};

/// Discrete trajectory u_0..u_n on a uniform time grid. `steps[k]` describes the
/// step from t_k to t_{k+1}. Injected trajectories carry no step reports.
struct Trajectory {
  TimeGrid tg;
  std::vector<NodalField> states;
  std::vector<StepReport> steps;
  /// Unconstrained predictions of the truncation scheme, one per step.
  std::vector<NodalField> tilde;
  SchemeKind kind = SchemeKind::Constrained;
  bool scheme_produced = false;
  double alpha = 1.0;
  /// Smallest nodal increment over the run; negative only for Penalty.
  double min_increment = 0.0;

  const Grid& grid() const { return states.front().grid; }
};

/// Iterates the configured step with the backward interpolant of `forcing`.
/// Step failures are rethrown as StepFailure carrying the step index.
Trajectory run(const DiscreteOperator& op, const ForcingSpec& forcing, const NodalField& u0, const TimeGrid& tg,
               const SchemeConfig& scheme);

/// Wraps analytic states u(t_k) as a trajectory.
Trajectory injected_trajectory(const TimeGrid& tg, const std::function<NodalField(double)>& u);
Trajectory injected_trajectory(const TimeGrid& tg, std::vector<NodalField> states);

/// Piecewise affine interpolant; throws InvalidInput for t outside [0, T].
NodalField eval_affine(const Trajectory& traj, double t);
/// Left-continuous piecewise constant interpolant: u_k on (t_{k-1}, t_k], u_0 at 0.
NodalField eval_backward(const Trajectory& traj, double t);

/// (u_{k+1} - u_k) / tau
NodalField discrete_speed(const Trajectory& traj, int k);

}  // namespace monoflow
