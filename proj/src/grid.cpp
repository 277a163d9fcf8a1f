#include "monoflow/grid.hpp"

#include <cmath>
#include <string>

#include "monoflow/errors.hpp"

namespace monoflow {

Grid build_grid(double x_left, double x_right, int n_cells) {
  if (!std::isfinite(x_left) || !std::isfinite(x_right) || !(x_left < x_right)) {
    throw InvalidInput("invalid domain: need finite x_left < x_right");
  }
  if (n_cells < 2) throw InvalidInput("no interior degrees of freedom");
  return Grid(x_left, x_right, n_cells);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(node_count());
  for (int i = 0; i <= n_cells_; ++i) x[static_cast<std::size_t>(i)] = node(i);
  return x;
}

std::vector<double> Grid::interior_nodes() const {
  std::vector<double> x(interior_count());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = interior_node(j);
  return x;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw InvalidInput("fields from different grids cannot be combined");
}

NodalField::NodalField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.interior_count()) {
    throw InvalidInput("dimension mismatch: expected " + std::to_string(g.interior_count()) + " interior values, got " +
                       std::to_string(values.size()));
  }
}

ForcingField::ForcingField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.node_count()) {
    throw InvalidInput("dimension mismatch: expected " + std::to_string(g.node_count()) + " nodal values, got " +
                       std::to_string(values.size()));
  }
}

ForcingField ForcingField::from_interior(const NodalField& u) {
  ForcingField f(u.grid);
  for (std::size_t j = 0; j < u.size(); ++j) f.values[j + 1] = u.values[j];
  return f;
}

NodalField operator+(const NodalField& a, const NodalField& b) {
  require_same_grid(a.grid, b.grid);
  NodalField out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] + b.values[i];
  return out;
}

NodalField operator-(const NodalField& a, const NodalField& b) {
  require_same_grid(a.grid, b.grid);
  NodalField out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  return out;
}

NodalField operator*(double s, const NodalField& a) {
  NodalField out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = s * a.values[i];
  return out;
}

ForcingField operator-(const ForcingField& a, const ForcingField& b) {
  require_same_grid(a.grid, b.grid);
  ForcingField out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  return out;
}

}  // namespace monoflow
