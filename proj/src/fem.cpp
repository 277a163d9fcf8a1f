#include "monoflow/fem.hpp"

#include <algorithm>
#include <cmath>

#include "monoflow/errors.hpp"
#include "monoflow/kernels.hpp"

namespace monoflow {

namespace {

void require_shape(const DiscreteOperator& op, const NodalField& u) {
  require_same_grid(op.grid, u.grid);
  if (u.size() != op.size()) throw InvalidInput("dimension mismatch");
}

void require_shape(const DiscreteOperator& op, const ForcingField& f) {
  require_same_grid(op.grid, f.grid);
  if (f.size() != op.grid.node_count()) throw InvalidInput("dimension mismatch");
}

}  // namespace

DiscreteOperator assemble(const Grid& grid, const CoefficientSpec& coeff) {
  auto a = kernels::omp::assemble(grid, coeff);
  return {grid, std::move(a.stiffness), std::move(a.mass), std::move(a.mass_full), std::move(a.lumped), coeff};
}

std::vector<double> load_vector(const DiscreteOperator& op, const ForcingField& f) {
  require_shape(op, f);
  std::vector<double> full(f.size());
  kernels::omp::matvec(op.mass_full, f.values, full);
  return {full.begin() + 1, full.end() - 1};
}

double stored_energy(const DiscreteOperator& op, const NodalField& u) {
  require_shape(op, u);
  std::vector<double> ku(u.size());
  kernels::omp::matvec(op.stiffness, u.values, ku);
  return 0.5 * kernels::omp::dot(u.values, ku);
}

double pairing(const DiscreteOperator& op, const ForcingField& f, const NodalField& u) {
  require_shape(op, u);
  const auto load = load_vector(op, f);
  return kernels::omp::dot(load, u.values);
}

double free_energy(const DiscreteOperator& op, const NodalField& u, const ForcingField& f) {
  return stored_energy(op, u) - pairing(op, f, u);
}

NodalField residual_representative(const DiscreteOperator& op, const NodalField& u, const ForcingField& f) {
  require_shape(op, u);
  require_shape(op, f);
  NodalField g(op.grid);
  kernels::omp::residual_representative(op.stiffness, op.mass_full, op.lumped, u.values, f.values, g.values);
  return g;
}

double unilateral_slope(const DiscreteOperator& op, const NodalField& u, const ForcingField& f) {
  const auto g = residual_representative(op, u, f);
  return std::sqrt(kernels::omp::weighted_positive_sum_squares(op.lumped, g.values));
}

double penalty_slope(const DiscreteOperator& op, const NodalField& u, const ForcingField& f, double alpha) {
  if (!(alpha >= 1.0)) throw InvalidInput("penalty weight alpha must be >= 1");
  const auto g = residual_representative(op, u, f);
  // The maximizing direction has the sign of g; negative entries are charged alpha.
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = g[i] >= 0.0 ? 1.0 : 1.0 / alpha;
    s += op.lumped[i] * w * g[i] * g[i];
  }
  return std::sqrt(s);
}

double lumped_norm(const DiscreteOperator& op, const NodalField& v) {
  require_shape(op, v);
  return std::sqrt(kernels::omp::weighted_sum_squares(op.lumped, v.values));
}

double mass_norm(const DiscreteOperator& op, const NodalField& v) {
  require_shape(op, v);
  std::vector<double> mv(v.size());
  kernels::omp::matvec(op.mass, v.values, mv);
  return std::sqrt(std::max(0.0, kernels::omp::dot(v.values, mv)));
}

double mass_norm(const DiscreteOperator& op, const ForcingField& f) {
  require_shape(op, f);
  std::vector<double> mf(f.size());
  kernels::omp::matvec(op.mass_full, f.values, mf);
  return std::sqrt(std::max(0.0, kernels::omp::dot(f.values, mf)));
}

double plus_norm(const NodalField& v, const DiscreteOperator& op, double tol_neg) {
  require_shape(op, v);
  for (double x : v.values) {
    if (x < -tol_neg) return std::numeric_limits<double>::infinity();
  }
  return lumped_norm(op, v);
}

double penalty_norm(const NodalField& v, const DiscreteOperator& op, double alpha) {
  if (!(alpha >= 1.0)) throw InvalidInput("penalty weight alpha must be >= 1");
  require_shape(op, v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = v[i] >= 0.0 ? 1.0 : alpha;
    s += op.lumped[i] * w * v[i] * v[i];
  }
  return std::sqrt(s);
}

}  // namespace monoflow
