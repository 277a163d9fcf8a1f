#include "monoflow/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "monoflow/errors.hpp"
#include "monoflow/io.hpp"

namespace monoflow {

Coefficient Coefficient::constant(double c) {
  return {[c](double) { return c; }, "constant:" + format_double(c)};
}

Coefficient Coefficient::affine(double c0, double c1) {
  return {[c0, c1](double x) { return c0 + c1 * x; }, "affine:" + format_double(c0) + "," + format_double(c1)};
}

Coefficient Coefficient::tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.empty()) throw InvalidInput("tabulated coefficient needs matching non-empty samples");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw InvalidInput("tabulated coefficient abscissae must increase");
  }
  std::string desc = "table:";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) desc += ";";
    desc += format_double(xs[i]) + "," + format_double(ys[i]);
  }
  auto eval = [xs = std::move(xs), ys = std::move(ys)](double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return (1.0 - w) * ys[i - 1] + w * ys[i];
  };
  return {std::move(eval), std::move(desc)};
}

Coefficient Coefficient::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "constant") {
    const auto v = parse_double_list(args, ',');
    if (v.size() != 1) throw InvalidInput("constant coefficient takes one value: " + text);
    return constant(v[0]);
  }
  if (kind == "affine") {
    const auto v = parse_double_list(args, ',');
    if (v.size() != 2) throw InvalidInput("affine coefficient takes two values: " + text);
    return affine(v[0], v[1]);
  }
  if (kind == "table") {
    std::vector<double> xs, ys;
    std::size_t start = 0;
    while (start <= args.size()) {
      const auto end = std::min(args.find(';', start), args.size());
      const auto pair = parse_double_list(args.substr(start, end - start), ',');
      if (pair.size() != 2) throw InvalidInput("table coefficient entries are x,y pairs: " + text);
      xs.push_back(pair[0]);
      ys.push_back(pair[1]);
      start = end + 1;
    }
    return tabulated(std::move(xs), std::move(ys));
  }
  throw InvalidInput("unknown coefficient preset: " + text);
}

}  // namespace monoflow
