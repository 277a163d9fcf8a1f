#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace monoflow {

/// Bad user-facing input: malformed domain, mismatched shapes, invalid parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear solve hit a non-positive pivot.
class IndefiniteSystem : public std::runtime_error {
 public:
  IndefiniteSystem() : std::runtime_error("indefinite system") {}
};

/// An iterative inner solver ran out of iterations. Carries the best iterate
/// and its KKT residual so callers can report them.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, std::vector<double> best_iterate, double residual, int iterations)
      : std::runtime_error(what), best_iterate_(std::move(best_iterate)), residual_(residual), iterations_(iterations) {}

  const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  std::vector<double> best_iterate_;
  double residual_;
  int iterations_;
};

/// A time step of an evolution failed; `step()` is the 0-based index of the
/// step from t_k to t_{k+1}.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(int step, const std::string& reason, double residual)
      : std::runtime_error("step " + std::to_string(step) + ": " + reason), step_(step), residual_(residual) {}

  int step() const noexcept { return step_; }
  double residual() const noexcept { return residual_; }

 private:
  int step_;
  double residual_;
};

}  // namespace monoflow
