#include "monoflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "monoflow/errors.hpp"
#include "monoflow/io.hpp"
#include "monoflow/tridiag.hpp"

namespace monoflow {

namespace {

constexpr double kTiny = 1e-14;

std::vector<ForcingField> forcing_means(const Trajectory& traj, const DiscreteOperator& op,
                                        const ForcingSpec& forcing) {
  require_same_grid(op.grid, traj.grid());
  return backward_interpolant(forcing, op.grid, traj.tg);
}

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

void require_same_discretization(const Trajectory& u, const Trajectory& v) {
  if (!(u.tg == v.tg)) throw InvalidInput("trajectories use different time grids");
  require_same_grid(u.grid(), v.grid());
}

}  // namespace

EnergyLedger energy_ledger(const Trajectory& traj, const DiscreteOperator& op, const ForcingSpec& forcing) {
  const auto fbar = forcing_means(traj, op, forcing);
  const double tau = traj.tg.tau();
  EnergyLedger L;
  double D = 0.0, DL = 0.0, S = 0.0, P = 0.0;
  const double E0 = stored_energy(op, traj.states.front());
  for (int k = 0; k <= traj.tg.n_steps; ++k) {
    const auto& u = traj.states[static_cast<std::size_t>(k)];
    if (k > 0) {
      const auto& f = fbar[static_cast<std::size_t>(k) - 1];
      const NodalField du = u - traj.states[static_cast<std::size_t>(k) - 1];
      D += quadratic_form(op.mass, du.values) / tau;
      DL += std::pow(lumped_norm(op, du), 2) / tau;
      S += tau * std::pow(unilateral_slope(op, u, f), 2);
      P += pairing(op, f, du);
    }
    const double E = stored_energy(op, u);
    L.t.push_back(traj.tg.t(k));
    L.E.push_back(E);
    L.D.push_back(D);
    L.S.push_back(S);
    L.P.push_back(P);
    L.R.push_back(E - E0 + D - P);
    L.D_lumped.push_back(DL);
    L.residual_curve.push_back(E - E0 + 0.5 * (DL + S) - P);
  }
  return L;
}

PowerBalance power_balance_ledger(const Trajectory& traj, const DiscreteOperator& op, const ForcingSpec& forcing) {
  if (forcing.smoothness() == Smoothness::L2) throw InvalidInput("power balance needs AC or autonomous forcing");
  const auto fbar = forcing_means(traj, op, forcing);
  const auto ledger = energy_ledger(traj, op, forcing);
  PowerBalance pb;
  const auto F_at = [&](int k) {
    const auto& f = fbar[static_cast<std::size_t>(std::max(k, 1)) - 1];
    return free_energy(op, traj.states[static_cast<std::size_t>(k)], f);
  };
  const double F0 = F_at(0);
  double Q = 0.0;
  for (int k = 0; k <= traj.tg.n_steps; ++k) {
    if (k >= 2) {
      const auto df = fbar[static_cast<std::size_t>(k) - 1] - fbar[static_cast<std::size_t>(k) - 2];
      Q += pairing(op, df, traj.states[static_cast<std::size_t>(k) - 1]);
    }
    const double F = F_at(k);
    const auto i = static_cast<std::size_t>(k);
    pb.t.push_back(traj.tg.t(k));
    pb.F.push_back(F);
    pb.Q.push_back(Q);
    pb.residual.push_back(F - F0 + ledger.D[i] + Q);
    pb.residual_curve.push_back(F - F0 + 0.5 * (ledger.D_lumped[i] + ledger.S[i]) + Q);
  }
  return pb;
}

std::string VerificationReport::verdict() const {
  if (reasons.empty()) return "certified";
  std::string out = "rejected(";
  for (std::size_t i = 0; i < reasons.size(); ++i) out += (i ? "," : "") + reasons[i];
  return out + ")";
}

VerificationReport verify_trajectory(const Trajectory& traj, const DiscreteOperator& op, const ForcingSpec& forcing,
                                     const Thresholds& th) {
  const auto fbar = forcing_means(traj, op, forcing);
  const auto ledger = energy_ledger(traj, op, forcing);
  const double scale = 1.0 + std::abs(ledger.E.front());
  const double tau = traj.tg.tau();

  VerificationReport rep;
  for (int k = 0; k < traj.tg.n_steps; ++k) {
    const auto& f = fbar[static_cast<std::size_t>(k)];
    const auto speed = discrete_speed(traj, k);
    const auto g = residual_representative(op, traj.states[static_cast<std::size_t>(k) + 1], f);

    NodalField diff(op.grid);
    NodalField plus_speed(op.grid);
    double along_speed = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      diff[i] = speed[i] - positive_part(g[i]);
      rep.pvi_violation = std::max(rep.pvi_violation, std::sqrt(op.lumped[i]) * positive_part(g[i] - speed[i]));
      plus_speed[i] = positive_part(speed[i]);
      along_speed += op.lumped[i] * (g[i] - speed[i]) * plus_speed[i];
    }
    rep.pde_residual_sup = std::max(rep.pde_residual_sup, lumped_norm(op, diff));
    const double n = lumped_norm(op, plus_speed);
    if (n > 0.0) rep.pvi_violation = std::max(rep.pvi_violation, positive_part(along_speed / n));
  }
  rep.energy_residual_final = ledger.R.back();
  rep.pde_threshold = th.pde_rel * scale;
  rep.pvi_threshold = th.pvi_rel * scale;
  rep.energy_threshold = std::max(th.energy_floor, th.energy_per_tau * tau) * scale;
  if (!(std::abs(rep.energy_residual_final) <= rep.energy_threshold)) rep.reasons.emplace_back("energy");
  if (!(rep.pde_residual_sup <= rep.pde_threshold)) rep.reasons.emplace_back("pde");
  if (!(rep.pvi_violation <= rep.pvi_threshold)) rep.reasons.emplace_back("pvi");
  return rep;
}

Trajectory load_trajectory(const std::string& path, const Grid& grid) {
  const auto table = read_csv(path);
  const auto& h = table.header;
  if (h.size() < 3 || h[0] != "k" || h[1] != "t") throw SchemaError(path + ": header must be k,t,x_1,...,x_m", 1);
  for (std::size_t j = 2; j < h.size(); ++j) {
    if (h[j] != "x_" + std::to_string(j - 1)) throw SchemaError(path + ": unexpected column '" + h[j] + "'", 1);
  }
  if (table.rows.size() < 2) throw SchemaError(path + ": need at least two time rows", 0);

  const int n_steps = static_cast<int>(table.rows.size()) - 1;
  const double T = table.rows.back()[1];
  if (!(T > 0.0)) throw SchemaError(path + ": final time must be positive", static_cast<int>(table.rows.size()) + 1);
  const TimeGrid tg = make_time_grid(T, n_steps);

  const std::size_t m = h.size() - 2;
  const Grid source = build_grid(grid.x_left(), grid.x_right(), static_cast<int>(m) + 1);
  std::vector<NodalField> states;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const int line = static_cast<int>(r) + 2;
    if (row[0] != static_cast<double>(r)) throw SchemaError(path + ":" + std::to_string(line) + ": k out of sequence", line);
    if (std::abs(row[1] - tg.t(static_cast<int>(r))) > 1e-9 * T) {
      throw SchemaError(path + ":" + std::to_string(line) + ": time grid is not uniform", line);
    }
    if (m == grid.interior_count()) {
      states.emplace_back(grid, std::vector<double>(row.begin() + 2, row.end()));
      continue;
    }
    std::vector<double> full(m + 2, 0.0);
    std::copy(row.begin() + 2, row.end(), full.begin() + 1);
    states.push_back(NodalField::interpolate(grid, [&](double x) {
      const double s = (x - source.x_left()) / source.h();
      const auto c = std::min(static_cast<std::size_t>(std::floor(s)), m);
      const double w = s - static_cast<double>(c);
      return (1.0 - w) * full[c] + w * full[c + 1];
    }));
  }
  return injected_trajectory(tg, std::move(states));
}

double check_comparison(const Trajectory& u, const Trajectory& v) {
  require_same_discretization(u, v);
  double worst = 0.0;
  for (std::size_t k = 0; k < u.states.size(); ++k) {
    for (std::size_t i = 0; i < u.states[k].size(); ++i) {
      worst = std::max(worst, positive_part(u.states[k][i] - v.states[k][i]));
    }
  }
  return worst;
}

double obstacle_complementarity(const DiscreteOperator& op, const NodalField& u, const NodalField& u_dot,
                                const ForcingField& f, const NodalField& u0) {
  const auto load = load_vector(op, f);
  const auto ku = multiply(op.stiffness, u.values);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - u0[i]) * (op.lumped[i] * u_dot[i] - load[i] + ku[i]);
  return s;
}

std::vector<double> obstacle_complementarity(const Trajectory& traj, const DiscreteOperator& op,
                                             const ForcingSpec& forcing) {
  const auto fbar = forcing_means(traj, op, forcing);
  std::vector<double> out;
  for (int k = 0; k < traj.tg.n_steps; ++k) {
    out.push_back(obstacle_complementarity(op, traj.states[static_cast<std::size_t>(k) + 1], discrete_speed(traj, k),
                                           fbar[static_cast<std::size_t>(k)], traj.states.front()));
  }
  return out;
}

ObstacleEquivalence check_fixed_obstacle_equivalence(const DiscreteOperator& op, const ForcingSpec& forcing,
                                                     const NodalField& u0, const TimeGrid& tg,
                                                     const SolverConfig& solver) {
  if (!forcing.is_autonomous()) throw InvalidInput("fixed-obstacle equivalence needs autonomous forcing");
  SchemeConfig sc;
  sc.solver = solver;
  sc.kind = SchemeKind::Constrained;
  const auto a = run(op, forcing, u0, tg, sc);
  sc.kind = SchemeKind::FixedObstacle;
  const auto b = run(op, forcing, u0, tg, sc);
  ObstacleEquivalence out;
  out.sup_distance = sup_distance(a, b, op);
  for (double c : obstacle_complementarity(a, op, forcing)) {
    out.max_complementarity = std::max(out.max_complementarity, std::abs(c));
  }
  return out;
}

double sup_distance(const Trajectory& u, const Trajectory& v, const DiscreteOperator& op) {
  require_same_discretization(u, v);
  double worst = 0.0;
  for (std::size_t k = 0; k < u.states.size(); ++k) worst = std::max(worst, lumped_norm(op, u.states[k] - v.states[k]));
  return worst;
}

double cauchy_distance(const Trajectory& coarse, const Trajectory& fine, const DiscreteOperator& op) {
  require_same_grid(coarse.grid(), fine.grid());
  if (coarse.tg.T != fine.tg.T || fine.tg.n_steps % coarse.tg.n_steps != 0) {
    throw InvalidInput("fine time grid must refine the coarse one");
  }
  const auto r = static_cast<std::size_t>(fine.tg.n_steps / coarse.tg.n_steps);
  double worst = 0.0;
  for (std::size_t k = 0; k < coarse.states.size(); ++k) {
    worst = std::max(worst, lumped_norm(op, coarse.states[k] - fine.states[r * k]));
  }
  return worst;
}

DependenceStudy continuous_dependence_study(const DiscreteOperator& op, const ForcingSpec& forcing,
                                            const NodalField& u0, const TimeGrid& tg, const SchemeConfig& scheme,
                                            const NodalField& du0, const std::function<double(double)>& df,
                                            const std::vector<double>& eps) {
  const auto base = run(op, forcing, u0, tg, scheme);
  const double E_base = stored_energy(op, base.states.back());
  DependenceStudy study;
  for (double e : eps) {
    const auto f = df ? forcing.with_offset(df, e) : forcing;
    const auto traj = run(op, f, u0 + e * du0, tg, scheme);
    study.rows.push_back({e, sup_distance(traj, base, op), std::abs(stored_energy(op, traj.states.back()) - E_base)});
  }
  auto sorted = study.rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.eps > b.eps; });
  study.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!(sorted[i].max_distance < sorted[i - 1].max_distance)) study.monotone = false;
  }
  return study;
}

ConvergenceStudy convergence_study(const DiscreteOperator& op, const ForcingSpec& forcing, const NodalField& u0,
                                   double T, const std::vector<int>& n_steps, const std::vector<SchemeKind>& kinds,
                                   const SchemeConfig& base) {
  if (n_steps.empty() || kinds.empty()) throw InvalidInput("study needs at least one time step and one scheme");
  for (std::size_t i = 1; i < n_steps.size(); ++i) {
    if (!(n_steps[i] > n_steps[i - 1]) || n_steps[i] % n_steps[i - 1] != 0) {
      throw InvalidInput("study time steps must decrease and nest");
    }
  }
  const std::size_t nt = n_steps.size(), nk = kinds.size();
  std::vector<std::optional<Trajectory>> runs(nt * nk);
  std::vector<std::exception_ptr> errors(nt * nk);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t task = 0; task < nt * nk; ++task) {
    try {
      SchemeConfig sc = base;
      sc.kind = kinds[task % nk];
      runs[task] = run(op, forcing, u0, make_time_grid(T, n_steps[task / nk]), sc);
    } catch (...) {
      errors[task] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ConvergenceStudy study;
  study.kinds = kinds;
  study.ratios.assign(nk, {});
  std::vector<std::vector<double>> gaps(nk);
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < nk; ++j) {
      const auto& traj = *runs[i * nk + j];
      const auto ledger = energy_ledger(traj, op, forcing);
      StudyRow row;
      row.n_steps = n_steps[i];
      row.tau = traj.tg.tau();
      row.kind = kinds[j];
      row.cauchy_gap = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                              : cauchy_distance(*runs[(i - 1) * nk + j], traj, op);
      row.cross_distance = sup_distance(traj, *runs[i * nk], op);
      row.energy_residual = ledger.R.back();
      row.slope_integral = ledger.S.back();
      row.speed_integral = ledger.D_lumped.back();
      if (i > 0) gaps[j].push_back(row.cauchy_gap);
      study.rows.push_back(row);
    }
  }

  study.applicable = nt >= 3;
  study.ratios_pass = study.applicable;
  for (std::size_t j = 0; j < nk; ++j) {
    for (std::size_t i = 1; i < gaps[j].size(); ++i) {
      const double r = gaps[j][i - 1] <= kTiny ? 0.0 : gaps[j][i] / gaps[j][i - 1];
      study.ratios[j].push_back(r);
      if (!(r <= kCauchyRatioBound)) study.ratios_pass = false;
    }
  }

  double cross = 0.0;
  for (std::size_t j = 1; j < nk; ++j) cross = std::max(cross, study.rows[(nt - 1) * nk + j].cross_distance);
  if (nt < 2) {
    study.cross_ratio = std::numeric_limits<double>::quiet_NaN();
    study.cross_pass = nk == 1;
  } else {
    const double finest_gap = gaps[0].back();
    if (finest_gap <= kTiny) {
      study.cross_ratio = 0.0;
      study.cross_pass = cross <= 10.0 * base.solver.kkt_tol;
    } else {
      study.cross_ratio = cross / finest_gap;
      study.cross_pass = study.cross_ratio <= kCrossAgreementFactor;
    }
  }
  return study;
}

std::vector<int> steps_from_taus(double T, const std::vector<double>& taus) {
  std::vector<int> out;
  for (double tau : taus) {
    if (!(tau > 0.0)) throw InvalidInput("time steps must be positive");
    const double n = std::round(T / tau);
    if (n < 1.0 || std::abs(n * tau - T) > 1e-12 * std::max(1.0, T)) {
      throw InvalidInput("time step " + format_double(tau) + " does not divide T = " + format_double(T));
    }
    out.push_back(static_cast<int>(n));
  }
  return out;
}

}  // namespace monoflow
