#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monoflow/grid.hpp"

namespace monoflow {

/// Regularity class of the forcing in time. AC enables the power-balance
/// ledger; Autonomous forcing is time-independent by construction.
enum class Smoothness { L2, AC, Autonomous };

std::string to_string(Smoothness s);

/// Uniform time grid t_k = k * T / n_steps.
struct TimeGrid {
  double T = 1.0;
  int n_steps = 1;

  double tau() const noexcept { return T / n_steps; }
  double t(int k) const noexcept { return k == n_steps ? T : k * tau(); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Throws InvalidInput unless T > 0 is finite and n_steps >= 1.
TimeGrid make_time_grid(double T, int n_steps);

/// Time-dependent forcing f(t, x).
class ForcingSpec {
 public:
  enum class Kind { Analytic, Separable, Table };
  enum class TableInterpolation { Constant, Linear };

  /// f(t, x) given pointwise. `time_degree`, when set, declares f polynomial in t
  /// of that degree between consecutive `breakpoints`, so interval means are
  /// computed exactly by Gauss-Legendre quadrature.
  static ForcingSpec analytic(std::function<double(double, double)> f, Smoothness smoothness,
                              std::optional<int> time_degree, std::vector<double> breakpoints, std::string description);

  /// f(t, x) = profile(t) * spatial(x).
  static ForcingSpec separable(std::function<double(double)> profile, std::function<double(double)> spatial,
                               Smoothness smoothness, std::optional<int> time_degree, std::string description);

  /// f(t, x) = spatial(x).
  static ForcingSpec autonomous(std::function<double(double)> spatial, std::string description);

  /// Nodal samples (all n_cells + 1 nodes) at increasing times. Constant
  /// interpolation holds sample i on [t_i, t_{i+1}); values are held constant
  /// outside the sampled range.
  static ForcingSpec table(const Grid& grid, std::vector<double> times, std::vector<std::vector<double>> samples,
                           TableInterpolation interpolation, Smoothness smoothness, std::string description);

  Kind kind() const noexcept { return kind_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  bool is_autonomous() const noexcept { return smoothness_ == Smoothness::Autonomous; }
  const std::string& description() const noexcept { return description_; }

  /// f(t, x) + eps * phi(x), keeping the smoothness tag.
  ForcingSpec with_offset(std::function<double(double)> phi, double eps) const;

  /// Nodal values of f(t, .) on every node of `grid`.
  ForcingField at(const Grid& grid, double t) const;

  /// Number of composite midpoint panels used when no polynomial degree is declared.
  static constexpr int kMidpointPanels = 8;

  friend ForcingField interval_average(const ForcingSpec& f, const Grid& grid, double t0, double t1);

 private:
  ForcingSpec() = default;
  double eval_point(double t, double x) const;
  double table_integral(std::size_t node, double t0, double t1) const;
  void add_offset(ForcingField& out) const;
  ForcingField at_raw(const Grid& grid, double t) const;
  ForcingField average_raw(const Grid& grid, double t0, double t1) const;

  Kind kind_ = Kind::Analytic;
  Smoothness smoothness_ = Smoothness::L2;
  std::string description_;
  std::function<double(double, double)> analytic_;
  std::function<double(double)> profile_;
  std::function<double(double)> spatial_;
  std::function<double(double)> offset_;
  std::optional<int> time_degree_;
  std::vector<double> breakpoints_;
  Grid table_grid_;
  std::vector<double> table_times_;
  std::vector<std::vector<double>> table_samples_;
  TableInterpolation table_interp_ = TableInterpolation::Constant;
};

/// Nodal interpolant of (1 / (t1 - t0)) int_{t0}^{t1} f(t, .) dt. Throws for t1 <= t0.
ForcingField interval_average(const ForcingSpec& f, const Grid& grid, double t0, double t1);

/// fbar_k = interval_average over (t_{k-1}, t_k] for k = 1..n_steps, returned
/// with 0-based index k - 1.
std::vector<ForcingField> backward_interpolant(const ForcingSpec& f, const Grid& grid, const TimeGrid& tg);

/// fbar_{k+1} - fbar_k. Throws for fewer than two entries.
std::vector<ForcingField> discrete_time_difference(const std::vector<ForcingField>& fbar);

/// Loads a piecewise-in-time table from CSV with header "t,node_0,...,node_m".
ForcingSpec load_forcing_table(const std::string& path, const Grid& grid, ForcingSpec::TableInterpolation interpolation);

}  // namespace monoflow
