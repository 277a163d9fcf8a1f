#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monoflow {

/// Uniform partition of [x_left, x_right] with homogeneous Dirichlet ends.
/// Nodes 0 and n_cells are boundary nodes and carry no unknowns.
class Grid {
 public:
  Grid() = default;

  double x_left() const noexcept { return x_left_; }
  double x_right() const noexcept { return x_right_; }
  int n_cells() const noexcept { return n_cells_; }
  double length() const noexcept { return x_right_ - x_left_; }
  double h() const noexcept { return (x_right_ - x_left_) / n_cells_; }

  /// Number of unknowns, n_cells - 1.
  std::size_t interior_count() const noexcept { return static_cast<std::size_t>(n_cells_ - 1); }
  std::size_t node_count() const noexcept { return static_cast<std::size_t>(n_cells_ + 1); }

  /// Coordinate of global node i in [0, n_cells].
  double node(int i) const noexcept { return x_left_ + i * h(); }
  /// Coordinate of interior unknown j, which is global node j + 1.
  double interior_node(std::size_t j) const noexcept { return node(static_cast<int>(j) + 1); }

  std::vector<double> nodes() const;
  std::vector<double> interior_nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  friend Grid build_grid(double, double, int);
  Grid(double x_left, double x_right, int n_cells) : x_left_(x_left), x_right_(x_right), n_cells_(n_cells) {}

  double x_left_ = 0.0;
  double x_right_ = 1.0;
  int n_cells_ = 2;
};

/// Throws InvalidInput on non-finite or reversed endpoints and on n_cells < 2.
Grid build_grid(double x_left, double x_right, int n_cells);

/// P1 function in H^1_0 stored by its interior nodal values.
struct NodalField {
  Grid grid;
  std::vector<double> values;

  NodalField() = default;
  explicit NodalField(const Grid& g) : grid(g), values(g.interior_count(), 0.0) {}
  NodalField(const Grid& g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  std::span<const double> view() const noexcept { return values; }

  template <class F>
  static NodalField interpolate(const Grid& g, F&& f) {
    NodalField out(g);
    for (std::size_t j = 0; j < out.size(); ++j) out.values[j] = f(g.interior_node(j));
    return out;
  }
};

/// Nodal interpolant of an L^2 datum on every node, boundary included.
/// Loads are computed with the full consistent mass matrix so boundary values
/// of the datum contribute to the first and last interior rows.
struct ForcingField {
  Grid grid;
  std::vector<double> values;

  ForcingField() = default;
  explicit ForcingField(const Grid& g) : grid(g), values(g.node_count(), 0.0) {}
  ForcingField(const Grid& g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  double& operator[](std::size_t i) noexcept { return values[i]; }

  /// Extension of an H^1_0 field by zero boundary values.
  static ForcingField from_interior(const NodalField& u);

  template <class F>
  static ForcingField interpolate(const Grid& g, F&& f) {
    ForcingField out(g);
    for (int i = 0; i <= g.n_cells(); ++i) out.values[static_cast<std::size_t>(i)] = f(g.node(i));
    return out;
  }
};

/// Throws InvalidInput unless both fields live on the same grid.
void require_same_grid(const Grid& a, const Grid& b);

NodalField operator+(const NodalField& a, const NodalField& b);
NodalField operator-(const NodalField& a, const NodalField& b);
NodalField operator*(double s, const NodalField& a);
ForcingField operator-(const ForcingField& a, const ForcingField& b);

}  // namespace monoflow
