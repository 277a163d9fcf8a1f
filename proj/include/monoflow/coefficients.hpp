#pragma once

#include <functional>
#include <string>
#include <vector>

namespace monoflow {

/// A scalar coefficient of x together with a printable description, used for
/// output metadata.
struct Coefficient {
  std::function<double(double)> eval;
  std::string description;

  double operator()(double x) const { return eval(x); }

  static Coefficient constant(double c);
  /// c0 + c1 * x
  static Coefficient affine(double c0, double c1);
  /// Piecewise-linear interpolation through (xs[i], ys[i]); constant
  /// extrapolation outside [xs.front(), xs.back()]. xs must be increasing.
  static Coefficient tabulated(std::vector<double> xs, std::vector<double> ys);

  /// Parses "constant:c", "affine:c0,c1" or "table:x0,y0;x1,y1;...".
  static Coefficient parse(const std::string& text);
};

/// Coefficients of a(u,v) = int B u'v' + b u v.
struct CoefficientSpec {
  Coefficient diffusion = Coefficient::constant(1.0);
  Coefficient reaction = Coefficient::constant(0.0);
};

}  // namespace monoflow
