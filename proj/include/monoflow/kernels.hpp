#pragma once

// Data-parallel inner loops of the solver. Every kernel has a plain serial
// reference in `serial` and an OpenMP version in `omp`; the library calls the
// `omp` versions, tests compare the two, and bench/ times them.
//
// Reductions in `omp` are blocked with a fixed block size and the partial sums
// are combined in block order, so results do not depend on the thread count.

#include <cstddef>
#include <span>

#include "monoflow/coefficients.hpp"
#include "monoflow/grid.hpp"
#include "monoflow/tridiag.hpp"

namespace monoflow::kernels {

inline constexpr std::size_t kReductionBlock = 1024;
/// Below this size the omp kernels run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 4096;

/// Matrices of the P1 discretization. `mass_full` spans all n_cells + 1 nodes
/// (boundary included) and is used to build loads from nodal forcing values.
struct Assembled {
  SymTridiag stiffness;
  SymTridiag mass;
  SymTridiag mass_full;
  std::vector<double> lumped;
};

namespace serial {

/// Cell-by-cell scatter assembly with midpoint coefficient evaluation.
Assembled assemble(const Grid& grid, const CoefficientSpec& coeff);
void matvec(const SymTridiag& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
/// sum_i w_i v_i^2
double weighted_sum_squares(std::span<const double> w, std::span<const double> v);
/// sum_i w_i max(v_i, 0)^2
double weighted_positive_sum_squares(std::span<const double> w, std::span<const double> v);
/// g_i = ((M_full f)_{i+1} - (K u)_i) / m_i over interior rows i.
void residual_representative(const SymTridiag& stiffness, const SymTridiag& mass_full, std::span<const double> lumped,
                             std::span<const double> u, std::span<const double> f_full, std::span<double> g);

}  // namespace serial

namespace omp {

/// Row-wise gather assembly; each interior row reads its two adjacent cells.
Assembled assemble(const Grid& grid, const CoefficientSpec& coeff);
void matvec(const SymTridiag& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
double weighted_sum_squares(std::span<const double> w, std::span<const double> v);
double weighted_positive_sum_squares(std::span<const double> w, std::span<const double> v);
void residual_representative(const SymTridiag& stiffness, const SymTridiag& mass_full, std::span<const double> lumped,
                             std::span<const double> u, std::span<const double> f_full, std::span<double> g);

}  // namespace omp

}  // namespace monoflow::kernels
