#pragma once

#include <span>
#include <vector>

namespace monoflow {

/// Symmetric tridiagonal matrix: diag has n entries, off has n - 1 entries
/// (off[i] couples rows i and i + 1).
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;

  SymTridiag() = default;
  explicit SymTridiag(std::size_t n) : diag(n, 0.0), off(n > 0 ? n - 1 : 0, 0.0) {}

  std::size_t size() const noexcept { return diag.size(); }

  /// Row sum over the stored columns.
  double row_sum(std::size_t i) const noexcept;
};

/// y = A x
std::vector<double> multiply(const SymTridiag& a, std::span<const double> x);
/// x^T A x
double quadratic_form(const SymTridiag& a, std::span<const double> x);
/// x^T A y
double bilinear_form(const SymTridiag& a, std::span<const double> x, std::span<const double> y);

/// A + s * diag(d)
SymTridiag add_diagonal(const SymTridiag& a, std::span<const double> d, double s);
/// A + s * B
SymTridiag add_scaled(const SymTridiag& a, const SymTridiag& b, double s);

/// Solves A x = rhs by LDL^T factorization. Throws IndefiniteSystem on a
/// non-positive pivot.
std::vector<double> solve_spd(const SymTridiag& a, std::span<const double> rhs);

}  // namespace monoflow
