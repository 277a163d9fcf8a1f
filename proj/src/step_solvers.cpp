#include "monoflow/step_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monoflow/errors.hpp"

namespace monoflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double residual_scale(const SymTridiag& a, std::span<const double> rhs, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    s = std::max(s, std::abs(rhs[i]));
    s = std::max(s, std::abs(a.diag[i] * x[i]));
  }
  return s;
}

void validate_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("time step tau must be positive");
}

// Reduced system of one active-set iteration: bound rows become identity rows
// and their couplings move to the right-hand side.
std::vector<double> solve_reduced(const StepSystem& sys, const std::vector<char>& active) {
  const std::size_t n = sys.rhs.size();
  SymTridiag r(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i]) {
      r.diag[i] = 1.0;
      b[i] = sys.lower[i];
      continue;
    }
    r.diag[i] = sys.matrix.diag[i];
    double bi = sys.rhs[i];
    if (i > 0 && active[i - 1]) bi -= sys.matrix.off[i - 1] * sys.lower[i - 1];
    if (i + 1 < n && active[i + 1]) bi -= sys.matrix.off[i] * sys.lower[i + 1];
    b[i] = bi;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) r.off[i] = (!active[i] && !active[i + 1]) ? sys.matrix.off[i] : 0.0;
  return solve_spd(r, b);
}

std::vector<double> multiplier_of(const StepSystem& sys, std::span<const double> x) {
  auto lambda = multiply(sys.matrix, x);
  for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] -= sys.rhs[i];
  return lambda;
}

QpSolution solve_active_set(const StepSystem& sys, const SolverConfig& cfg) {
  const std::size_t n = sys.rhs.size();
  std::vector<double> x0(n);
  for (std::size_t i = 0; i < n; ++i) x0[i] = std::isfinite(sys.lower[i]) ? sys.lower[i] : 0.0;
  const auto lambda0 = multiplier_of(sys, x0);
  std::vector<char> active(n, 0);
  for (std::size_t i = 0; i < n; ++i) active[i] = std::isfinite(sys.lower[i]) && lambda0[i] > 0.0;

  std::vector<double> best;
  double best_res = kInf;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    auto x = solve_reduced(sys, active);
    auto lambda = multiplier_of(sys, x);
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) lambda[i] = 0.0;
    }
    std::vector<char> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(sys.lower[i])) continue;
      next[i] = lambda[i] + sys.matrix.diag[i] * (sys.lower[i] - x[i]) > 0.0;
    }
    const double res = qp_kkt_residual(sys, x);
    if (next == active || res <= cfg.kkt_tol) {
      QpSolution sol;
      for (std::size_t i = 0; i < n; ++i) sol.active_count += active[i] ? 1 : 0;
      sol.kkt_residual = res;
      sol.x = std::move(x);
      sol.multiplier = std::move(lambda);
      sol.iterations = it;
      return sol;
    }
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    active = std::move(next);
  }
  throw NonConvergence("active set iteration did not converge", std::move(best), best_res, cfg.max_iter);
}

QpSolution solve_projected_sor(const StepSystem& sys, const SolverConfig& cfg) {
  const std::size_t n = sys.rhs.size();
  const auto& a = sys.matrix;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::isfinite(sys.lower[i]) ? sys.lower[i] : 0.0;
  double res = kInf;
  for (int sweep = 1; sweep <= cfg.max_iter; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      double r = sys.rhs[i];
      if (i > 0) r -= a.off[i - 1] * x[i - 1];
      if (i + 1 < n) r -= a.off[i] * x[i + 1];
      const double gs = r / a.diag[i];
      x[i] = std::max(sys.lower[i], (1.0 - cfg.sor_omega) * x[i] + cfg.sor_omega * gs);
    }
    res = qp_kkt_residual(sys, x);
    if (res <= cfg.kkt_tol) {
      QpSolution sol;
      sol.multiplier = multiplier_of(sys, x);
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > sys.lower[i]) {
          sol.multiplier[i] = 0.0;
        } else {
          ++sol.active_count;
        }
      }
      sol.x = std::move(x);
      sol.iterations = sweep;
      sol.kkt_residual = res;
      return sol;
    }
  }
  throw NonConvergence("projected SOR did not converge", std::move(x), res, cfg.max_iter);
}

StepReport base_report(const DiscreteOperator& op, const NodalField& u_prev, const NodalField& u_next,
                       const ForcingField& fbar, double tau) {
  StepReport r;
  const NodalField speed = (1.0 / tau) * (u_next - u_prev);
  r.speed_norm = lumped_norm(op, speed);
  r.energy_after = stored_energy(op, u_next);
  r.power_term = pairing(op, fbar, u_next - u_prev);
  r.min_increment = kInf;
  for (std::size_t i = 0; i < u_next.size(); ++i) r.min_increment = std::min(r.min_increment, u_next[i] - u_prev[i]);
  if (u_next.size() == 0) r.min_increment = 0.0;
  return r;
}

StepResult bounded_step(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                        std::vector<double> lower, const SolverConfig& cfg) {
  const auto sys = build_step_system(op, u_prev, fbar, tau, std::move(lower), cfg.prox);
  auto sol = solve_lower_bounded(sys, cfg);
  StepResult out;
  out.u_next = NodalField(op.grid, std::move(sol.x));
  out.report = base_report(op, u_prev, out.u_next, fbar, tau);
  out.report.slope_at = unilateral_slope(op, out.u_next, fbar);
  out.report.active_count = sol.active_count;
  out.report.inner_iterations = sol.iterations;
  out.report.kkt_residual = sol.kkt_residual;
  out.multiplier = std::move(sol.multiplier);
  return out;
}

std::vector<double> unconstrained_solve(const StepSystem& sys) { return solve_spd(sys.matrix, sys.rhs); }

}  // namespace

void SolverConfig::validate() const {
  if (!(kkt_tol > 0.0)) throw InvalidInput("kkt_tol must be positive");
  if (max_iter < 1) throw InvalidInput("max_iter must be at least 1");
  if (!(sor_omega > 0.0 && sor_omega < 2.0)) throw InvalidInput("sor_omega must lie in (0, 2)");
}

std::string to_string(InnerMethod m) { return m == InnerMethod::ActiveSet ? "active_set" : "projected_sor"; }
std::string to_string(ProxMetric m) { return m == ProxMetric::Lumped ? "lumped" : "consistent"; }

StepSystem build_step_system(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                             std::vector<double> lower, ProxMetric prox) {
  validate_tau(tau);
  require_same_grid(op.grid, u_prev.grid);
  if (lower.size() != op.size()) throw InvalidInput("dimension mismatch in lower bound");
  StepSystem sys;
  sys.rhs = load_vector(op, fbar);
  if (prox == ProxMetric::Lumped) {
    sys.matrix = add_diagonal(op.stiffness, op.lumped, 1.0 / tau);
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) sys.rhs[i] += op.lumped[i] * u_prev[i] / tau;
  } else {
    sys.matrix = add_scaled(op.stiffness, op.mass, 1.0 / tau);
    const auto mu = multiply(op.mass, u_prev.values);
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) sys.rhs[i] += mu[i] / tau;
  }
  for (double v : sys.rhs) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite step data");
  }
  sys.lower = std::move(lower);
  return sys;
}

double KktBreakdown::max() const noexcept {
  return std::max(std::max(stationarity, negativity), std::max(feasibility, complementarity));
}

KktBreakdown qp_kkt_breakdown(const StepSystem& sys, std::span<const double> x) {
  const auto lambda = multiplier_of(sys, x);
  const double s = residual_scale(sys.matrix, sys.rhs, x);
  KktBreakdown k;
  if (s == 0.0) return k;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = sys.matrix.diag[i];
    const double gap = x[i] - sys.lower[i];  // +inf when unbounded
    if (gap > 0.0) {
      k.stationarity = std::max(k.stationarity, std::abs(lambda[i]));
      if (std::isfinite(gap)) k.complementarity = std::max(k.complementarity, std::min(std::abs(lambda[i]), d * gap));
    } else {
      k.negativity = std::max(k.negativity, std::max(0.0, -lambda[i]));
      k.feasibility = std::max(k.feasibility, d * (-gap));
      k.complementarity = std::max(k.complementarity, std::min(std::abs(lambda[i]), d * (-gap)));
    }
  }
  k.stationarity /= s;
  k.negativity /= s;
  k.feasibility /= s;
  k.complementarity /= s;
  return k;
}

double qp_kkt_residual(const StepSystem& sys, std::span<const double> x) { return qp_kkt_breakdown(sys, x).max(); }

QpSolution solve_lower_bounded(const StepSystem& sys, const SolverConfig& cfg) {
  cfg.validate();
  if (sys.lower.size() != sys.rhs.size() || sys.matrix.size() != sys.rhs.size()) {
    throw InvalidInput("dimension mismatch in step system");
  }
  return cfg.method == InnerMethod::ActiveSet ? solve_active_set(sys, cfg) : solve_projected_sor(sys, cfg);
}

StepResult step_constrained(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                            const SolverConfig& cfg) {
  return bounded_step(op, u_prev, fbar, tau, u_prev.values, cfg);
}

StepResult step_fixed_obstacle(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar,
                               double tau, const NodalField& floor, const SolverConfig& cfg) {
  require_same_grid(u_prev.grid, floor.grid);
  for (std::size_t i = 0; i < u_prev.size(); ++i) {
    if (u_prev[i] < floor[i]) throw InvalidInput("infeasible previous state: below the obstacle");
  }
  return bounded_step(op, u_prev, fbar, tau, floor.values, cfg);
}

StepResult step_unconstrained(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar,
                              double tau, const SolverConfig& cfg) {
  cfg.validate();
  const auto sys = build_step_system(op, u_prev, fbar, tau, std::vector<double>(op.size(), -kInf), cfg.prox);
  StepResult out;
  out.u_next = NodalField(op.grid, unconstrained_solve(sys));
  out.report = base_report(op, u_prev, out.u_next, fbar, tau);
  out.report.slope_at = lumped_norm(op, residual_representative(op, out.u_next, fbar));
  out.report.inner_iterations = 1;
  out.report.kkt_residual = qp_kkt_residual(sys, out.u_next.values);
  return out;
}

StepResult step_truncation(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                           const SolverConfig& cfg) {
  cfg.validate();
  const auto sys = build_step_system(op, u_prev, fbar, tau, std::vector<double>(op.size(), -kInf), cfg.prox);
  NodalField tilde(op.grid, unconstrained_solve(sys));
  StepResult out;
  out.u_next = NodalField(op.grid);
  int truncated = 0;
  for (std::size_t i = 0; i < tilde.size(); ++i) {
    out.u_next[i] = std::max(tilde[i], u_prev[i]);
    truncated += tilde[i] < u_prev[i] ? 1 : 0;
  }
  out.report = base_report(op, u_prev, out.u_next, fbar, tau);
  out.report.slope_at = unilateral_slope(op, tilde, fbar);
  out.report.active_count = truncated;
  out.report.inner_iterations = 1;
  out.report.kkt_residual = qp_kkt_residual(sys, tilde.values);
  out.u_tilde = std::move(tilde);
  return out;
}

StepResult step_penalty(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                        double alpha, const SolverConfig& cfg) {
  cfg.validate();
  validate_tau(tau);
  if (!(alpha >= 1.0)) throw InvalidInput("penalty weight alpha must be >= 1");
  if (alpha > kMaxPenaltyAlpha) throw InvalidInput("penalty weight alpha exceeds overflow guard 1e12");
  if (cfg.prox != ProxMetric::Lumped) throw InvalidInput("penalty scheme requires the lumped prox metric");
  require_same_grid(op.grid, u_prev.grid);

  const std::size_t n = op.size();
  const auto load = load_vector(op, fbar);
  std::vector<double> weight(n, 1.0);

  auto solve_pattern = [&](const std::vector<double>& w) {
    StepSystem sys;
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = op.lumped[i] * w[i];
    sys.matrix = add_diagonal(op.stiffness, d, 1.0 / tau);
    sys.rhs = load;
    for (std::size_t i = 0; i < n; ++i) sys.rhs[i] += d[i] * u_prev[i] / tau;
    sys.lower.assign(n, -kInf);
    auto x = solve_spd(sys.matrix, sys.rhs);
    return std::make_pair(std::move(x), std::move(sys));
  };
  auto pattern_of = [&](const std::vector<double>& x) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = x[i] >= u_prev[i] ? 1.0 : alpha;
    return w;
  };

  std::vector<double> best;
  double best_res = kInf;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    auto [x, sys] = solve_pattern(weight);
    auto next = pattern_of(x);
    const double res = qp_kkt_residual(sys, x);
    if (next == weight) {
      StepResult out;
      out.u_next = NodalField(op.grid, std::move(x));
      out.report = base_report(op, u_prev, out.u_next, fbar, tau);
      out.report.slope_at = penalty_slope(op, out.u_next, fbar, alpha);
      int below = 0;
      for (std::size_t i = 0; i < n; ++i) below += out.u_next[i] < u_prev[i] ? 1 : 0;
      out.report.active_count = below;
      out.report.inner_iterations = it;
      out.report.kkt_residual = res;
      out.alpha = alpha;
      return out;
    }
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    weight = std::move(next);
  }
  throw NonConvergence("penalty Newton iteration did not converge", std::move(best), best_res, cfg.max_iter);
}

double kkt_residual(const DiscreteOperator& op, const NodalField& u_prev, const NodalField& u_next,
                    const ForcingField& fbar, double tau, std::span<const double> lower) {
  require_same_grid(u_prev.grid, u_next.grid);
  const auto sys = build_step_system(op, u_prev, fbar, tau, {lower.begin(), lower.end()}, ProxMetric::Lumped);
  return qp_kkt_residual(sys, u_next.values);
}

}  // namespace monoflow
