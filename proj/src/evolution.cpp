#include "monoflow/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monoflow/errors.hpp"
#include "monoflow/io.hpp"

namespace monoflow {

std::string to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::Constrained: return "constrained";
    case SchemeKind::Truncation: return "truncation";
    case SchemeKind::Penalty: return "penalty";
    case SchemeKind::FixedObstacle: return "fixed_obstacle";
    case SchemeKind::Unconstrained: return "unconstrained";
  }
  return "constrained";
}

SchemeKind parse_scheme_kind(const std::string& text) {
  for (auto k : {SchemeKind::Constrained, SchemeKind::Truncation, SchemeKind::Penalty, SchemeKind::FixedObstacle,
                 SchemeKind::Unconstrained}) {
    if (text == to_string(k)) return k;
  }
  throw InvalidInput("unknown scheme '" + text + "'");
}

double AlphaSchedule::operator()(double tau) const { return std::max(1.0, eval(tau)); }

AlphaSchedule AlphaSchedule::power(double p, double c) {
  if (!(p >= 0.0) || !(c > 0.0)) throw InvalidInput("alpha schedule needs p >= 0 and c > 0");
  std::string desc = p == 1.0 && c == 1.0 ? "inverse_tau" : "power:" + format_double(p) + "," + format_double(c);
  return {[p, c](double tau) { return c * std::pow(tau, -p); }, desc};
}

AlphaSchedule AlphaSchedule::constant(double alpha) {
  if (!(alpha >= 1.0)) throw InvalidInput("constant alpha must be >= 1");
  return {[alpha](double) { return alpha; }, "constant:" + format_double(alpha)};
}

AlphaSchedule AlphaSchedule::parse(const std::string& text) {
  if (text == "inverse_tau") return power(1.0);
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const auto head = text.substr(0, colon);
    const auto args = parse_double_list(text.substr(colon + 1), ',');
    if (head == "power" && (args.size() == 1 || args.size() == 2)) return power(args[0], args.size() == 2 ? args[1] : 1.0);
    if (head == "constant" && args.size() == 1) return constant(args[0]);
  }
  throw InvalidInput("unknown alpha schedule '" + text + "'");
}

Trajectory run(const DiscreteOperator& op, const ForcingSpec& forcing, const NodalField& u0, const TimeGrid& tg,
               const SchemeConfig& scheme) {
  require_same_grid(op.grid, u0.grid);
  for (double v : u0.values) {
    if (!std::isfinite(v)) throw InvalidInput("initial datum must be finite");
  }
  make_time_grid(tg.T, tg.n_steps);
  scheme.solver.validate();

  const double tau = tg.tau();
  const auto fbar = backward_interpolant(forcing, op.grid, tg);
  const double alpha = scheme.kind == SchemeKind::Penalty ? scheme.alpha_schedule(tau) : 1.0;

  Trajectory traj;
  traj.tg = tg;
  traj.kind = scheme.kind;
  traj.scheme_produced = true;
  traj.alpha = alpha;
  traj.min_increment = std::numeric_limits<double>::infinity();
  traj.states.reserve(static_cast<std::size_t>(tg.n_steps) + 1);
  traj.states.push_back(u0);

  for (int k = 0; k < tg.n_steps; ++k) {
    const auto& u = traj.states.back();
    const auto& f = fbar[static_cast<std::size_t>(k)];
    StepResult r;
    try {
      switch (scheme.kind) {
        case SchemeKind::Constrained: r = step_constrained(op, u, f, tau, scheme.solver); break;
        case SchemeKind::Truncation: r = step_truncation(op, u, f, tau, scheme.solver); break;
        case SchemeKind::Penalty: r = step_penalty(op, u, f, tau, alpha, scheme.solver); break;
        case SchemeKind::FixedObstacle: r = step_fixed_obstacle(op, u, f, tau, u0, scheme.solver); break;
        case SchemeKind::Unconstrained: r = step_unconstrained(op, u, f, tau, scheme.solver); break;
      }
    } catch (const NonConvergence& e) {
      throw StepFailure(k, e.what(), e.residual());
    } catch (const IndefiniteSystem& e) {
      throw StepFailure(k, e.what(), std::numeric_limits<double>::quiet_NaN());
    }
    if (!(r.report.kkt_residual <= scheme.solver.kkt_tol)) {
      throw StepFailure(k, "KKT residual above tolerance", r.report.kkt_residual);
    }
    r.report.k = k;
    traj.min_increment = std::min(traj.min_increment, r.report.min_increment);
    traj.steps.push_back(r.report);
    if (r.u_tilde) traj.tilde.push_back(std::move(*r.u_tilde));
    traj.states.push_back(std::move(r.u_next));
  }
  return traj;
}

Trajectory injected_trajectory(const TimeGrid& tg, std::vector<NodalField> states) {
  make_time_grid(tg.T, tg.n_steps);
  if (states.size() != static_cast<std::size_t>(tg.n_steps) + 1) {
    throw InvalidInput("trajectory needs n_steps + 1 states");
  }
  for (const auto& s : states) require_same_grid(states.front().grid, s.grid);
  Trajectory traj;
  traj.tg = tg;
  traj.states = std::move(states);
  traj.min_increment = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    for (std::size_t i = 0; i < traj.states[k].size(); ++i) {
      traj.min_increment = std::min(traj.min_increment, traj.states[k + 1][i] - traj.states[k][i]);
    }
  }
  return traj;
}

Trajectory injected_trajectory(const TimeGrid& tg, const std::function<NodalField(double)>& u) {
  std::vector<NodalField> states;
  for (int k = 0; k <= tg.n_steps; ++k) states.push_back(u(tg.t(k)));
  return injected_trajectory(tg, std::move(states));
}

NodalField eval_affine(const Trajectory& traj, double t) {
  const auto& tg = traj.tg;
  if (!(t >= 0.0 && t <= tg.T)) throw InvalidInput("time outside [0, T]");
  const int k = std::min(static_cast<int>(std::floor(t / tg.tau())), tg.n_steps - 1);
  const double t0 = tg.t(k), t1 = tg.t(k + 1);
  if (t == t0) return traj.states[static_cast<std::size_t>(k)];
  if (t == t1) return traj.states[static_cast<std::size_t>(k) + 1];
  const double w = (t - t0) / (t1 - t0);
  const auto& a = traj.states[static_cast<std::size_t>(k)];
  const auto& b = traj.states[static_cast<std::size_t>(k) + 1];
  NodalField out(a.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * a[i] + w * b[i];
  return out;
}

NodalField eval_backward(const Trajectory& traj, double t) {
  const auto& tg = traj.tg;
  if (!(t >= 0.0 && t <= tg.T)) throw InvalidInput("time outside [0, T]");
  if (t == 0.0) return traj.states.front();
  int k = static_cast<int>(std::ceil(t / tg.tau()));
  k = std::clamp(k, 1, tg.n_steps);
  if (tg.t(k - 1) >= t) --k;
  if (tg.t(k) < t) ++k;
  return traj.states[static_cast<std::size_t>(k)];
}

NodalField discrete_speed(const Trajectory& traj, int k) {
  if (k < 0 || k >= traj.tg.n_steps) throw InvalidInput("step index out of range");
  const auto& a = traj.states[static_cast<std::size_t>(k)];
  const auto& b = traj.states[static_cast<std::size_t>(k) + 1];
  return (1.0 / traj.tg.tau()) * (b - a);
}

}  // namespace monoflow
