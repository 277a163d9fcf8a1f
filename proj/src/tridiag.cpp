#include "monoflow/tridiag.hpp"

#include <cmath>

#include "monoflow/errors.hpp"

namespace monoflow {

double SymTridiag::row_sum(std::size_t i) const noexcept {
  double s = diag[i];
  if (i > 0) s += off[i - 1];
  if (i + 1 < diag.size()) s += off[i];
  return s;
}

std::vector<double> multiply(const SymTridiag& a, std::span<const double> x) {
  const std::size_t n = a.size();
  if (x.size() != n) throw InvalidInput("dimension mismatch in tridiagonal product");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = a.diag[i] * x[i];
    if (i > 0) s += a.off[i - 1] * x[i - 1];
    if (i + 1 < n) s += a.off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double bilinear_form(const SymTridiag& a, std::span<const double> x, std::span<const double> y) {
  const auto ay = multiply(a, y);
  double s = 0.0;
  for (std::size_t i = 0; i < ay.size(); ++i) s += x[i] * ay[i];
  return s;
}

double quadratic_form(const SymTridiag& a, std::span<const double> x) { return bilinear_form(a, x, x); }

SymTridiag add_diagonal(const SymTridiag& a, std::span<const double> d, double s) {
  if (d.size() != a.size()) throw InvalidInput("dimension mismatch in diagonal update");
  SymTridiag out = a;
  for (std::size_t i = 0; i < d.size(); ++i) out.diag[i] += s * d[i];
  return out;
}

SymTridiag add_scaled(const SymTridiag& a, const SymTridiag& b, double s) {
  if (a.size() != b.size()) throw InvalidInput("dimension mismatch in matrix sum");
  SymTridiag out = a;
  for (std::size_t i = 0; i < a.diag.size(); ++i) out.diag[i] += s * b.diag[i];
  for (std::size_t i = 0; i < a.off.size(); ++i) out.off[i] += s * b.off[i];
  return out;
}

std::vector<double> solve_spd(const SymTridiag& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  if (rhs.size() != n) throw InvalidInput("dimension mismatch in tridiagonal solve");
  std::vector<double> d(n), l(n > 0 ? n - 1 : 0), x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a.diag[i];
    if (i > 0) d[i] -= l[i - 1] * a.off[i - 1];
    if (!(d[i] > 0.0) || !std::isfinite(d[i])) throw IndefiniteSystem();
    if (i + 1 < n) l[i] = a.off[i] / d[i];
  }
  for (std::size_t i = 1; i < n; ++i) x[i] -= l[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d[i];
  for (std::size_t i = n; i-- > 1;) x[i - 1] -= l[i - 1] * x[i];
  return x;
}

}  // namespace monoflow
