#pragma once

#include <limits>
#include <vector>

#include "monoflow/coefficients.hpp"
#include "monoflow/grid.hpp"
#include "monoflow/tridiag.hpp"

namespace monoflow {

/// P1 discretization of a(u, v) = int B u'v' + b u v on a Grid.
///
/// `stiffness` and `mass` act on interior unknowns. `lumped` holds the row sums
/// of the full mass matrix (boundary columns included), so every entry equals
/// the integral of the corresponding hat function. `mass_full` is the consistent
/// mass over all nodes and turns nodal forcing values into loads.
struct DiscreteOperator {
  Grid grid;
  SymTridiag stiffness;
  SymTridiag mass;
  SymTridiag mass_full;
  std::vector<double> lumped;
  CoefficientSpec coefficients;

  std::size_t size() const noexcept { return stiffness.size(); }
};

DiscreteOperator assemble(const Grid& grid, const CoefficientSpec& coeff);

/// Interior rows of M_full * f: the load vector <f, phi_i>.
std::vector<double> load_vector(const DiscreteOperator& op, const ForcingField& f);

/// E(u) = 1/2 u^T K u
double stored_energy(const DiscreteOperator& op, const NodalField& u);
/// E(u) - <f, u> with the consistent-mass pairing.
double free_energy(const DiscreteOperator& op, const NodalField& u, const ForcingField& f);
/// <f, u> with the consistent mass.
double pairing(const DiscreteOperator& op, const ForcingField& f, const NodalField& u);

/// g = M_L^{-1} (M f - K u), the lumped representative of A u + f.
NodalField residual_representative(const DiscreteOperator& op, const NodalField& u, const ForcingField& f);

/// ||[g]_+||_{M_L}; equals sup { (M f - K u)^T z : z >= 0, ||z||_{M_L} <= 1 }.
double unilateral_slope(const DiscreteOperator& op, const NodalField& u, const ForcingField& f);

/// sup { (M f - K u)^T z : |z|_{pen, alpha} <= 1 }, the slope dual to penalty_norm.
double penalty_slope(const DiscreteOperator& op, const NodalField& u, const ForcingField& f, double alpha);

/// ||v||_{M_L}
double lumped_norm(const DiscreteOperator& op, const NodalField& v);
/// ||v||_M with the consistent interior mass.
double mass_norm(const DiscreteOperator& op, const NodalField& v);
/// ||f||_M with the full consistent mass.
double mass_norm(const DiscreteOperator& op, const ForcingField& f);

/// ||v||_{M_L} if v_i >= -tol_neg for every i, +infinity otherwise.
double plus_norm(const NodalField& v, const DiscreteOperator& op, double tol_neg = 0.0);

/// sqrt(sum_i m_i psi(v_i)) with psi(v) = v^2 for v >= 0 and alpha v^2 otherwise.
/// Throws InvalidInput for alpha < 1.
double penalty_norm(const NodalField& v, const DiscreteOperator& op, double alpha);

}  // namespace monoflow
