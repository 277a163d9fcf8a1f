#include "monoflow/forcing.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "monoflow/errors.hpp"
#include "monoflow/io.hpp"

namespace monoflow {

namespace {

struct GaussRule {
  std::array<double, 5> nodes;
  std::array<double, 5> weights;
  int n;
};

// Gauss-Legendre rules on [-1, 1]; rule q integrates polynomials of degree 2q - 1 exactly.
const GaussRule& gauss_rule(int q) {
  static const std::array<GaussRule, 5> rules = {{
      {{0.0}, {2.0}, 1},
      {{-0.57735026918962576, 0.57735026918962576}, {1.0, 1.0}, 2},
      {{-0.77459666924148338, 0.0, 0.77459666924148338}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}, 3},
      {{-0.86113631159405258, -0.33998104358485626, 0.33998104358485626, 0.86113631159405258},
       {0.34785484513745386, 0.65214515486254614, 0.65214515486254614, 0.34785484513745386},
       4},
      {{-0.90617984593866399, -0.53846931010568309, 0.0, 0.53846931010568309, 0.90617984593866399},
       {0.23692688505618909, 0.47862867049936647, 0.56888888888888889, 0.47862867049936647, 0.23692688505618909},
       5},
  }};
  return rules[static_cast<std::size_t>(q - 1)];
}

// Quadrature points and weights for int_{t0}^{t1}, split at breakpoints.
struct TimeQuadrature {
  std::vector<double> t;
  std::vector<double> w;
};

TimeQuadrature time_quadrature(double t0, double t1, std::optional<int> degree, const std::vector<double>& breakpoints) {
  std::vector<double> cuts{t0};
  for (double b : breakpoints) {
    if (b > t0 && b < t1) cuts.push_back(b);
  }
  cuts.push_back(t1);

  TimeQuadrature q;
  const int gauss_points = degree ? (*degree + 2) / 2 : 0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    if (degree && gauss_points <= 5) {
      const auto& rule = gauss_rule(std::max(gauss_points, 1));
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int i = 0; i < rule.n; ++i) {
        q.t.push_back(mid + half * rule.nodes[static_cast<std::size_t>(i)]);
        q.w.push_back(half * rule.weights[static_cast<std::size_t>(i)]);
      }
    } else {
      const int panels = ForcingSpec::kMidpointPanels;
      const double dt = (b - a) / panels;
      for (int i = 0; i < panels; ++i) {
        q.t.push_back(a + (i + 0.5) * dt);
        q.w.push_back(dt);
      }
    }
  }
  return q;
}

}  // namespace

std::string to_string(Smoothness s) {
  switch (s) {
    case Smoothness::L2: return "L2";
    case Smoothness::AC: return "AC";
    case Smoothness::Autonomous: return "autonomous";
  }
  return "L2";
}

TimeGrid make_time_grid(double T, int n_steps) {
  if (!std::isfinite(T) || !(T > 0.0)) throw InvalidInput("final time T must be positive and finite");
  if (n_steps < 1) throw InvalidInput("n_steps must be a positive integer");
  return {T, n_steps};
}

ForcingSpec ForcingSpec::analytic(std::function<double(double, double)> f, Smoothness smoothness,
                                  std::optional<int> time_degree, std::vector<double> breakpoints,
                                  std::string description) {
  ForcingSpec s;
  s.kind_ = Kind::Analytic;
  s.smoothness_ = smoothness;
  s.analytic_ = std::move(f);
  s.time_degree_ = time_degree;
  s.breakpoints_ = std::move(breakpoints);
  std::sort(s.breakpoints_.begin(), s.breakpoints_.end());
  s.description_ = std::move(description);
  return s;
}

ForcingSpec ForcingSpec::separable(std::function<double(double)> profile, std::function<double(double)> spatial,
                                   Smoothness smoothness, std::optional<int> time_degree, std::string description) {
  ForcingSpec s;
  s.kind_ = Kind::Separable;
  s.smoothness_ = smoothness;
  s.profile_ = std::move(profile);
  s.spatial_ = std::move(spatial);
  s.time_degree_ = time_degree;
  s.description_ = std::move(description);
  return s;
}

ForcingSpec ForcingSpec::autonomous(std::function<double(double)> spatial, std::string description) {
  return separable([](double) { return 1.0; }, std::move(spatial), Smoothness::Autonomous, 0, std::move(description));
}

ForcingSpec ForcingSpec::table(const Grid& grid, std::vector<double> times, std::vector<std::vector<double>> samples,
                               TableInterpolation interpolation, Smoothness smoothness, std::string description) {
  if (times.empty() || times.size() != samples.size()) throw InvalidInput("forcing table needs one sample row per time");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidInput("forcing table times must increase");
  }
  for (const auto& row : samples) {
    if (row.size() != grid.node_count()) throw InvalidInput("forcing table row does not match grid node count");
  }
  ForcingSpec s;
  s.kind_ = Kind::Table;
  s.smoothness_ = smoothness;
  s.table_grid_ = grid;
  s.table_times_ = std::move(times);
  s.table_samples_ = std::move(samples);
  s.table_interp_ = interpolation;
  s.breakpoints_ = s.table_times_;
  s.description_ = std::move(description);
  return s;
}

ForcingSpec ForcingSpec::with_offset(std::function<double(double)> phi, double eps) const {
  ForcingSpec s = *this;
  auto prev = offset_;
  s.offset_ = [prev, phi = std::move(phi), eps](double x) { return (prev ? prev(x) : 0.0) + eps * phi(x); };
  s.description_ += " + offset";
  return s;
}

void ForcingSpec::add_offset(ForcingField& out) const {
  if (!offset_) return;
  for (int n = 0; n <= out.grid.n_cells(); ++n) out.values[static_cast<std::size_t>(n)] += offset_(out.grid.node(n));
}

double ForcingSpec::eval_point(double t, double x) const {
  return kind_ == Kind::Analytic ? analytic_(t, x) : profile_(t) * spatial_(x);
}

ForcingField ForcingSpec::at(const Grid& grid, double t) const {
  ForcingField out = at_raw(grid, t);
  add_offset(out);
  return out;
}

ForcingField ForcingSpec::at_raw(const Grid& grid, double t) const {
  ForcingField out(grid);
  if (kind_ == Kind::Table) {
    require_same_grid(grid, table_grid_);
    const auto& ts = table_times_;
    if (t <= ts.front()) return ForcingField(grid, table_samples_.front());
    if (t >= ts.back()) return ForcingField(grid, table_samples_.back());
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
    if (table_interp_ == TableInterpolation::Constant) return ForcingField(grid, table_samples_[i]);
    const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    for (std::size_t n = 0; n < out.size(); ++n) {
      out.values[n] = (1.0 - w) * table_samples_[i][n] + w * table_samples_[i + 1][n];
    }
    return out;
  }
  for (int n = 0; n <= grid.n_cells(); ++n) out.values[static_cast<std::size_t>(n)] = eval_point(t, grid.node(n));
  return out;
}

double ForcingSpec::table_integral(std::size_t node, double t0, double t1) const {
  const auto& ts = table_times_;
  auto value = [&](double t) {
    if (t <= ts.front()) return table_samples_.front()[node];
    if (t >= ts.back()) return table_samples_.back()[node];
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
    if (table_interp_ == TableInterpolation::Constant) return table_samples_[i][node];
    const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    return (1.0 - w) * table_samples_[i][node] + w * table_samples_[i + 1][node];
  };
  std::vector<double> cuts{t0};
  for (double b : ts) {
    if (b > t0 && b < t1) cuts.push_back(b);
  }
  cuts.push_back(t1);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    if (table_interp_ == TableInterpolation::Constant) {
      total += value(0.5 * (a + b)) * (b - a);
    } else {
      total += 0.5 * (value(a) + value(b)) * (b - a);
    }
  }
  return total;
}

ForcingField interval_average(const ForcingSpec& f, const Grid& grid, double t0, double t1) {
  if (!(t1 > t0)) throw InvalidInput("interval_average needs t1 > t0");
  ForcingField out = f.average_raw(grid, t0, t1);
  f.add_offset(out);
  return out;
}

ForcingField ForcingSpec::average_raw(const Grid& grid, double t0, double t1) const {
  const ForcingSpec& f = *this;
  ForcingField out(grid);
  const double len = t1 - t0;

  if (f.kind_ == ForcingSpec::Kind::Table) {
    require_same_grid(grid, f.table_grid_);
    for (std::size_t n = 0; n < out.size(); ++n) out.values[n] = f.table_integral(n, t0, t1) / len;
    return out;
  }
  if (f.is_autonomous()) {
    for (int n = 0; n <= grid.n_cells(); ++n) out.values[static_cast<std::size_t>(n)] = f.spatial_(grid.node(n));
    return out;
  }

  const auto q = time_quadrature(t0, t1, f.time_degree_, f.breakpoints_);
  if (f.kind_ == ForcingSpec::Kind::Separable) {
    double mean = 0.0;
    for (std::size_t i = 0; i < q.t.size(); ++i) mean += q.w[i] * f.profile_(q.t[i]);
    mean /= len;
    for (int n = 0; n <= grid.n_cells(); ++n) out.values[static_cast<std::size_t>(n)] = mean * f.spatial_(grid.node(n));
    return out;
  }
  for (int n = 0; n <= grid.n_cells(); ++n) {
    const double x = grid.node(n);
    double s = 0.0;
    for (std::size_t i = 0; i < q.t.size(); ++i) s += q.w[i] * f.analytic_(q.t[i], x);
    out.values[static_cast<std::size_t>(n)] = s / len;
  }
  return out;
}

std::vector<ForcingField> backward_interpolant(const ForcingSpec& f, const Grid& grid, const TimeGrid& tg) {
  std::vector<ForcingField> out;
  out.reserve(static_cast<std::size_t>(tg.n_steps));
  for (int k = 1; k <= tg.n_steps; ++k) out.push_back(interval_average(f, grid, tg.t(k - 1), tg.t(k)));
  return out;
}

std::vector<ForcingField> discrete_time_difference(const std::vector<ForcingField>& fbar) {
  if (fbar.size() < 2) throw InvalidInput("discrete_time_difference needs at least two entries");
  std::vector<ForcingField> out;
  out.reserve(fbar.size() - 1);
  for (std::size_t k = 0; k + 1 < fbar.size(); ++k) out.push_back(fbar[k + 1] - fbar[k]);
  return out;
}

ForcingSpec load_forcing_table(const std::string& path, const Grid& grid,
                               ForcingSpec::TableInterpolation interpolation) {
  const auto table = read_csv(path);
  if (table.header.empty() || table.header.front() != "t") throw InvalidInput(path + ": first column must be 't'");
  if (table.header.size() != grid.node_count() + 1) {
    throw InvalidInput(path + ": expected " + std::to_string(grid.node_count()) + " node columns");
  }
  std::vector<double> times;
  std::vector<std::vector<double>> samples;
  for (const auto& row : table.rows) {
    times.push_back(row.front());
    samples.emplace_back(row.begin() + 1, row.end());
  }
  return ForcingSpec::table(grid, std::move(times), std::move(samples), interpolation, Smoothness::L2,
                            "table:" + path);
}

}  // namespace monoflow
