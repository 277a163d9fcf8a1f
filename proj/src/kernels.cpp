#include "monoflow/kernels.hpp"

#include <algorithm>
#include <vector>

#include "monoflow/errors.hpp"

namespace monoflow::kernels {

namespace {

struct CellCoefficients {
  std::vector<double> diffusion;
  std::vector<double> reaction;
};

void check_coercive(const CellCoefficients& c) {
  for (double b : c.diffusion) {
    if (!(b > 0.0)) throw InvalidInput("loss of coercivity: diffusion coefficient must be positive");
  }
}

// Element contributions of one cell with midpoint coefficients.
struct CellMatrices {
  double k_diag, k_off, m_diag, m_off;
};

inline CellMatrices cell_matrices(double diffusion, double reaction, double h) {
  return {diffusion / h + reaction * (2.0 * h / 6.0), -diffusion / h + reaction * (h / 6.0), 2.0 * h / 6.0, h / 6.0};
}

void extract_interior(const SymTridiag& full, SymTridiag& interior) {
  const std::size_t m = full.size() - 2;
  interior = SymTridiag(m);
  for (std::size_t i = 0; i < m; ++i) interior.diag[i] = full.diag[i + 1];
  for (std::size_t i = 0; i + 1 < m; ++i) interior.off[i] = full.off[i + 1];
}

template <class Op>
double blocked_sum(std::size_t n, Op term) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  const long nb = static_cast<long>(blocks);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (long b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

namespace serial {

Assembled assemble(const Grid& grid, const CoefficientSpec& coeff) {
  const int n_cells = grid.n_cells();
  const double h = grid.h();
  CellCoefficients cc{std::vector<double>(static_cast<std::size_t>(n_cells)),
                      std::vector<double>(static_cast<std::size_t>(n_cells))};
  for (int c = 0; c < n_cells; ++c) {
    const double xm = grid.node(c) + 0.5 * h;
    cc.diffusion[static_cast<std::size_t>(c)] = coeff.diffusion(xm);
    cc.reaction[static_cast<std::size_t>(c)] = coeff.reaction(xm);
  }
  check_coercive(cc);

  SymTridiag k_full(grid.node_count());
  SymTridiag m_full(grid.node_count());
  for (std::size_t c = 0; c < static_cast<std::size_t>(n_cells); ++c) {
    const auto e = cell_matrices(cc.diffusion[c], cc.reaction[c], h);
    k_full.diag[c] += e.k_diag;
    k_full.diag[c + 1] += e.k_diag;
    k_full.off[c] += e.k_off;
    m_full.diag[c] += e.m_diag;
    m_full.diag[c + 1] += e.m_diag;
    m_full.off[c] += e.m_off;
  }

  Assembled out;
  extract_interior(k_full, out.stiffness);
  extract_interior(m_full, out.mass);
  out.lumped.resize(grid.interior_count());
  for (std::size_t i = 0; i < out.lumped.size(); ++i) out.lumped[i] = m_full.row_sum(i + 1);
  out.mass_full = std::move(m_full);
  return out;
}

void matvec(const SymTridiag& a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = a.diag[i] * x[i];
    if (i > 0) s += a.off[i - 1] * x[i - 1];
    if (i + 1 < n) s += a.off[i] * x[i + 1];
    y[i] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double weighted_sum_squares(std::span<const double> w, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
  return s;
}

double weighted_positive_sum_squares(std::span<const double> w, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = std::max(v[i], 0.0);
    s += w[i] * p * p;
  }
  return s;
}

void residual_representative(const SymTridiag& stiffness, const SymTridiag& mass_full, std::span<const double> lumped,
                             std::span<const double> u, std::span<const double> f_full, std::span<double> g) {
  const std::size_t m = stiffness.size();
  std::vector<double> load(mass_full.size());
  matvec(mass_full, f_full, load);
  std::vector<double> ku(m);
  matvec(stiffness, u, ku);
  for (std::size_t i = 0; i < m; ++i) g[i] = (load[i + 1] - ku[i]) / lumped[i];
}

}  // namespace serial

namespace omp {

Assembled assemble(const Grid& grid, const CoefficientSpec& coeff) {
  const long n_cells = grid.n_cells();
  const double h = grid.h();
  const bool par = static_cast<std::size_t>(n_cells) >= kParallelThreshold;
  CellCoefficients cc{std::vector<double>(static_cast<std::size_t>(n_cells)),
                      std::vector<double>(static_cast<std::size_t>(n_cells))};
#pragma omp parallel for schedule(static) if (par)
  for (long c = 0; c < n_cells; ++c) {
    const double xm = grid.node(static_cast<int>(c)) + 0.5 * h;
    cc.diffusion[static_cast<std::size_t>(c)] = coeff.diffusion(xm);
    cc.reaction[static_cast<std::size_t>(c)] = coeff.reaction(xm);
  }
  check_coercive(cc);

  const std::size_t nodes = grid.node_count();
  SymTridiag k_full(nodes);
  SymTridiag m_full(nodes);
  const long n_nodes = static_cast<long>(nodes);
#pragma omp parallel for schedule(static) if (par)
  for (long il = 0; il < n_nodes; ++il) {
    const std::size_t i = static_cast<std::size_t>(il);
    double kd = 0.0, md = 0.0;
    if (i > 0) {
      const auto e = cell_matrices(cc.diffusion[i - 1], cc.reaction[i - 1], h);
      kd += e.k_diag;
      md += e.m_diag;
    }
    if (i + 1 < nodes) {
      const auto e = cell_matrices(cc.diffusion[i], cc.reaction[i], h);
      kd += e.k_diag;
      md += e.m_diag;
      k_full.off[i] = 0.0 + e.k_off;
      m_full.off[i] = 0.0 + e.m_off;
    }
    k_full.diag[i] = kd;
    m_full.diag[i] = md;
  }

  Assembled out;
  extract_interior(k_full, out.stiffness);
  extract_interior(m_full, out.mass);
  out.lumped.resize(grid.interior_count());
  const long m = static_cast<long>(out.lumped.size());
#pragma omp parallel for schedule(static) if (par)
  for (long i = 0; i < m; ++i) out.lumped[static_cast<std::size_t>(i)] = m_full.row_sum(static_cast<std::size_t>(i) + 1);
  out.mass_full = std::move(m_full);
  return out;
}

void matvec(const SymTridiag& a, std::span<const double> x, std::span<double> y) {
  const long n = static_cast<long>(a.size());
#pragma omp parallel for schedule(static) if (a.size() >= kParallelThreshold)
  for (long il = 0; il < n; ++il) {
    const std::size_t i = static_cast<std::size_t>(il);
    double s = a.diag[i] * x[i];
    if (il > 0) s += a.off[i - 1] * x[i - 1];
    if (il + 1 < n) s += a.off[i] * x[i + 1];
    y[i] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  return blocked_sum(x.size(), [&](std::size_t i) { return x[i] * y[i]; });
}

double weighted_sum_squares(std::span<const double> w, std::span<const double> v) {
  return blocked_sum(v.size(), [&](std::size_t i) { return w[i] * v[i] * v[i]; });
}

double weighted_positive_sum_squares(std::span<const double> w, std::span<const double> v) {
  return blocked_sum(v.size(), [&](std::size_t i) {
    const double p = std::max(v[i], 0.0);
    return w[i] * p * p;
  });
}

void residual_representative(const SymTridiag& stiffness, const SymTridiag& mass_full, std::span<const double> lumped,
                             std::span<const double> u, std::span<const double> f_full, std::span<double> g) {
  const long m = static_cast<long>(stiffness.size());
  const std::size_t nodes = mass_full.size();
#pragma omp parallel for schedule(static) if (stiffness.size() >= kParallelThreshold)
  for (long il = 0; il < m; ++il) {
    const std::size_t i = static_cast<std::size_t>(il);
    const std::size_t r = i + 1;  // row of the full mass matrix
    double load = mass_full.diag[r] * f_full[r];
    load += mass_full.off[r - 1] * f_full[r - 1];
    if (r + 1 < nodes) load += mass_full.off[r] * f_full[r + 1];
    double ku = stiffness.diag[i] * u[i];
    if (il > 0) ku += stiffness.off[i - 1] * u[i - 1];
    if (il + 1 < m) ku += stiffness.off[i] * u[i + 1];
    g[i] = (load - ku) / lumped[i];
  }
}

}  // namespace omp

}  // namespace monoflow::kernels
