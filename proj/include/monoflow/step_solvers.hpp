#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monoflow/fem.hpp"
#include "monoflow/grid.hpp"
#include "monoflow/tridiag.hpp"

namespace monoflow {

enum class InnerMethod { ActiveSet, ProjectedSor };
/// Metric of the proximal term (1 / 2 tau) |u - u_prev|^2. Lumped is the
/// reference; Consistent exists for sensitivity studies only.
enum class ProxMetric { Lumped, Consistent };

struct SolverConfig {
  double kkt_tol = 1e-10;
  int max_iter = 200;
  InnerMethod method = InnerMethod::ActiveSet;
  double sor_omega = 1.5;
  ProxMetric prox = ProxMetric::Lumped;

  /// Throws InvalidInput for kkt_tol <= 0, max_iter < 1 or omega outside (0, 2).
  void validate() const;
};

std::string to_string(InnerMethod m);
std::string to_string(ProxMetric m);

/// min 1/2 x^T A x - rhs^T x  subject to  x >= lower, with
/// A = K + M_L / tau and rhs = M f + M_L u_prev / tau. Entries of `lower` may be
/// -infinity (no bound).
struct StepSystem {
  SymTridiag matrix;
  std::vector<double> rhs;
  std::vector<double> lower;
};

StepSystem build_step_system(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                             std::vector<double> lower, ProxMetric prox = ProxMetric::Lumped);

/// Pieces of the KKT certificate of a lower-bounded QP, all relative to the
/// scale max(|rhs|_inf, max_i A_ii |x_i|). Nodes with x_i > lower_i are free.
struct KktBreakdown {
  double stationarity = 0.0;     ///< |(A x - rhs)_i| on free nodes
  double negativity = 0.0;       ///< negative multipliers on bound nodes
  double feasibility = 0.0;      ///< A_ii (lower_i - x_i)_+
  double complementarity = 0.0;  ///< min(|lambda_i|, A_ii |x_i - lower_i|)

  double max() const noexcept;
};

KktBreakdown qp_kkt_breakdown(const StepSystem& sys, std::span<const double> x);
double qp_kkt_residual(const StepSystem& sys, std::span<const double> x);

struct QpSolution {
  std::vector<double> x;
  std::vector<double> multiplier;  ///< A x - rhs; nonnegative on bound nodes, zero on free nodes
  int iterations = 0;
  int active_count = 0;
  double kkt_residual = 0.0;
};

/// Primal-dual active set (semismooth Newton) or projected SOR, per cfg.method.
/// Throws NonConvergence with the best iterate when the cap is hit. Zero
/// multiplier ties are classified free.
QpSolution solve_lower_bounded(const StepSystem& sys, const SolverConfig& cfg);

/// Per-step diagnostics. `k` is filled in by the evolution driver.
struct StepReport {
  int k = 0;
  double speed_norm = 0.0;
  double slope_at = 0.0;
  double energy_after = 0.0;
  double power_term = 0.0;
  int active_count = 0;
  int inner_iterations = 0;
  double kkt_residual = 0.0;
  double min_increment = 0.0;
};

struct StepResult {
  NodalField u_next;
  StepReport report;
  /// Unconstrained prediction of the truncation scheme.
  std::optional<NodalField> u_tilde;
  /// KKT multiplier of the bound (constrained and fixed-obstacle steps).
  std::vector<double> multiplier;
  /// Penalty weight used (penalty steps; 1 otherwise).
  double alpha = 1.0;
};

/// Minimizes F(u) + (1/2 tau)|u - u_prev|^2_{M_L} over u >= u_prev.
StepResult step_constrained(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                            const SolverConfig& cfg);

/// Unconstrained proximal step followed by u_next = max(u_tilde, u_prev).
StepResult step_truncation(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                           const SolverConfig& cfg);

/// Minimizes F(u) + (1/2 tau) sum_i m_i psi_alpha(u_i - u_prev_i) by Newton
/// iteration on the sign pattern of u - u_prev. Requires 1 <= alpha <= 1e12.
StepResult step_penalty(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar, double tau,
                        double alpha, const SolverConfig& cfg);

/// Same as step_constrained with the fixed bound u >= floor.
StepResult step_fixed_obstacle(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar,
                               double tau, const NodalField& floor, const SolverConfig& cfg);

/// Plain implicit Euler step (no constraint).
StepResult step_unconstrained(const DiscreteOperator& op, const NodalField& u_prev, const ForcingField& fbar,
                              double tau, const SolverConfig& cfg);

/// KKT certificate of u_next for the step VI with bound `lower` (lumped prox).
double kkt_residual(const DiscreteOperator& op, const NodalField& u_prev, const NodalField& u_next,
                    const ForcingField& fbar, double tau, std::span<const double> lower);

/// Largest penalty weight accepted by step_penalty.
inline constexpr double kMaxPenaltyAlpha = 1e12;

}  // namespace monoflow
