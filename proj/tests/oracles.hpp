#pragma once

// Brute-force references that share no code with the library solvers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (a[p][c] == 0.0) throw std::runtime_error("singular");
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

inline Dense tridiag_to_dense(const std::vector<double>& diag, const std::vector<double>& off) {
  const std::size_t n = diag.size();
  Dense a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) a[i][i + 1] = a[i + 1][i] = off[i];
  return a;
}

// min 1/2 x^T A x - b^T x over x >= lower by trying every active set and
// keeping the one whose reduced solution satisfies all KKT conditions.
inline std::optional<std::vector<double>> enumerate_lower_bounded(const Dense& a, const std::vector<double>& b,
                                                                  const std::vector<double>& lower,
                                                                  double tol = 1e-12) {
  const std::size_t n = b.size();
  if (n > 20) throw std::invalid_argument("enumeration limited to 20 unknowns");
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(b[i]));
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> free_idx;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        x[i] = lower[i];
      } else {
        free_idx.push_back(i);
      }
    }
    if (!free_idx.empty()) {
      Dense r(free_idx.size(), std::vector<double>(free_idx.size()));
      std::vector<double> rhs(free_idx.size());
      for (std::size_t p = 0; p < free_idx.size(); ++p) {
        rhs[p] = b[free_idx[p]];
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (1u << i)) rhs[p] -= a[free_idx[p]][i] * lower[i];
        }
        for (std::size_t q = 0; q < free_idx.size(); ++q) r[p][q] = a[free_idx[p]][free_idx[q]];
      }
      const auto y = dense_solve(r, rhs);
      for (std::size_t p = 0; p < free_idx.size(); ++p) x[free_idx[p]] = y[p];
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      double lambda = -b[i];
      for (std::size_t k = 0; k < n; ++k) lambda += a[i][k] * x[k];
      if (mask & (1u << i)) {
        ok = lambda >= -tol * scale;
      } else {
        ok = x[i] >= lower[i] - tol * scale;
      }
    }
    if (ok) return x;
  }
  return std::nullopt;
}

}  // namespace oracle
