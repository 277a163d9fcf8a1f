#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monoflow/evolution.hpp"
#include "monoflow/fem.hpp"
#include "monoflow/forcing.hpp"

namespace monoflow {

/// Energy balance of a trajectory at every time node t_k.
///
/// R = E - E_0 + D - P with D = sum tau |u_dot|_M^2 (consistent mass) and
/// P = sum <fbar_j, u_{j+1} - u_j>. `residual_curve` is the slope form
/// E - E_0 + (D_lumped + S) / 2 - P, with D_lumped = sum tau |u_dot|_{M_L}^2 and
/// S = sum tau slope(u_{j+1}, fbar_j)^2. Both are nonpositive for scheme output.
struct EnergyLedger {
  std::vector<double> t;
  std::vector<double> E;
  std::vector<double> D;
  std::vector<double> S;
  std::vector<double> P;
  std::vector<double> R;
  std::vector<double> D_lumped;
  std::vector<double> residual_curve;

  std::size_t size() const noexcept { return t.size(); }
};

EnergyLedger energy_ledger(const Trajectory& traj, const DiscreteOperator& op, const ForcingSpec& forcing);

/// Free-energy form F_k - F_0 + D_k + Q_k with F_k = E(u_k) - <fbar_k, u_k> and
/// Q_k = sum_{j=1}^{k-1} <fbar_j - fbar_{j-1}, u_j>.
struct PowerBalance {
  std::vector<double> t;
  std::vector<double> F;
  std::vector<double> Q;
  std::vector<double> residual;
  std::vector<double> residual_curve;
};

/// Throws InvalidInput unless the forcing is tagged AC or autonomous.
PowerBalance power_balance_ledger(const Trajectory& traj, const DiscreteOperator& op, const ForcingSpec& forcing);

struct Thresholds {
  double pde_rel = 1e-6;
  double pvi_rel = 1e-6;
  double energy_floor = 1e-8;
  double energy_per_tau = 5.0;
};

struct VerificationReport {
  double pde_residual_sup = 0.0;
  double pvi_violation = 0.0;
  double energy_residual_final = 0.0;
  double pde_threshold = 0.0;
  double pvi_threshold = 0.0;
  double energy_threshold = 0.0;
  /// Failed checks in the order energy, pde, pvi.
  std::vector<std::string> reasons;

  bool certified() const noexcept { return reasons.empty(); }
  std::string verdict() const;
};

VerificationReport verify_trajectory(const Trajectory& traj, const DiscreteOperator& op, const ForcingSpec& forcing,
                                     const Thresholds& th = {});

/// Reads a trajectory CSV ("k,t,x_1,...,x_m") and resamples it onto the
/// interior nodes of `grid` by linear interpolation. Raises SchemaError.
Trajectory load_trajectory(const std::string& path, const Grid& grid);

/// max over k, i of (u_k - v_k)_+.
double check_comparison(const Trajectory& u, const Trajectory& v);

/// (u - u0)^T (M_L u_dot - M f + K u)
double obstacle_complementarity(const DiscreteOperator& op, const NodalField& u, const NodalField& u_dot,
                                const ForcingField& f, const NodalField& u0);

/// Per-step complementarity at (u_{k+1}, u_dot_k, fbar_k) against the initial state.
std::vector<double> obstacle_complementarity(const Trajectory& traj, const DiscreteOperator& op,
                                             const ForcingSpec& forcing);

struct ObstacleEquivalence {
  double sup_distance = 0.0;
  double max_complementarity = 0.0;
};

/// Runs Constrained and FixedObstacle (floor u0) on the same data. Requires
/// autonomous forcing.
ObstacleEquivalence check_fixed_obstacle_equivalence(const DiscreteOperator& op, const ForcingSpec& forcing,
                                                     const NodalField& u0, const TimeGrid& tg,
                                                     const SolverConfig& solver);

/// sup_k |u_k - v_k|_{M_L} on a common time grid.
double sup_distance(const Trajectory& u, const Trajectory& v, const DiscreteOperator& op);
/// sup_k |coarse_k - fine_{r k}|_{M_L} where fine has r times as many steps.
double cauchy_distance(const Trajectory& coarse, const Trajectory& fine, const DiscreteOperator& op);

struct DependenceRow {
  double eps = 0.0;
  double max_distance = 0.0;
  double final_energy_gap = 0.0;
};

struct DependenceStudy {
  std::vector<DependenceRow> rows;
  bool monotone = false;
};

/// Runs the flow from u0 + eps du0 with forcing f + eps df for each eps and
/// compares with the eps = 0 flow.
DependenceStudy continuous_dependence_study(const DiscreteOperator& op, const ForcingSpec& forcing,
                                            const NodalField& u0, const TimeGrid& tg, const SchemeConfig& scheme,
                                            const NodalField& du0, const std::function<double(double)>& df,
                                            const std::vector<double>& eps = {0.1, 0.05, 0.025});

struct StudyRow {
  int n_steps = 0;
  double tau = 0.0;
  SchemeKind kind = SchemeKind::Constrained;
  /// Distance to the previous (coarser) run of the same kind; NaN for the first.
  double cauchy_gap = 0.0;
  /// Distance to the first listed kind at the same tau.
  double cross_distance = 0.0;
  double energy_residual = 0.0;
  double slope_integral = 0.0;
  double speed_integral = 0.0;
};

struct ConvergenceStudy {
  std::vector<StudyRow> rows;
  /// Successive Cauchy-gap ratios per kind, in the order of `kinds`.
  std::vector<std::vector<double>> ratios;
  std::vector<SchemeKind> kinds;
  /// Largest cross distance at the finest tau over the first kind's finest gap.
  double cross_ratio = 0.0;
  bool applicable = false;
  bool ratios_pass = false;
  bool cross_pass = false;
};

inline constexpr double kCauchyRatioBound = 0.7;
inline constexpr double kCrossAgreementFactor = 5.0;

/// Runs every (n_steps, kind) pair concurrently. n_steps must increase and each
/// must be a multiple of the previous one.
ConvergenceStudy convergence_study(const DiscreteOperator& op, const ForcingSpec& forcing, const NodalField& u0,
                                   double T, const std::vector<int>& n_steps, const std::vector<SchemeKind>& kinds,
                                   const SchemeConfig& base);

/// Converts a list of time steps into step counts; throws unless each tau divides T.
std::vector<int> steps_from_taus(double T, const std::vector<double>& taus);

}  // namespace monoflow
