#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "monoflow/errors.hpp"
#include "monoflow/evolution.hpp"
#include "monoflow/scenarios.hpp"

namespace monoflow {

/// Configuration error with a user-facing message (exit code 4).
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct EmitFlags {
  bool trajectory = true;
  bool steps = true;
  bool ledger = true;
  bool report = true;
};

/// Validated run configuration. Unset optional fields fall back to the
/// scenario's own defaults.
struct RunConfig {
  std::string scenario = "hat";
  SchemeKind scheme = SchemeKind::Constrained;
  std::optional<double> T;
  std::optional<int> n_steps;
  std::string output_dir = "out";

  std::optional<double> x_left;
  std::optional<double> x_right;
  int n_cells = 0;
  std::optional<std::string> diffusion;
  std::optional<std::string> reaction;
  std::optional<std::string> forcing_table;
  ForcingSpec::TableInterpolation forcing_interp = ForcingSpec::TableInterpolation::Constant;
  std::optional<std::string> u0_preset;

  SolverConfig solver;
  std::string alpha_schedule = "inverse_tau";

  std::vector<int> study_n_steps;
  std::vector<SchemeKind> study_schemes{SchemeKind::Constrained, SchemeKind::Truncation, SchemeKind::Penalty};

  EmitFlags emit;
  std::string trajectory_path;

  /// Every key = value pair after defaults and overrides, in canonical order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses an INI-style file ("[section]" headers, "key = value" lines, '#' or
/// ';' comments; keys before the first header belong to [run]) and applies
/// `overrides` ("section.key" -> value) on top. Throws ConfigError naming any
/// unknown key or invalid value.
RunConfig parse_config(const std::optional<std::string>& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Parses the config text directly (used by parse_config and tests).
RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Scenario with grid, coefficient, forcing and initial-datum overrides applied.
Scenario resolve_scenario(const RunConfig& cfg);
double resolved_T(const RunConfig& cfg, const Scenario& s);
int resolved_n_steps(const RunConfig& cfg, const Scenario& s);
SchemeConfig scheme_config(const RunConfig& cfg);

}  // namespace monoflow
