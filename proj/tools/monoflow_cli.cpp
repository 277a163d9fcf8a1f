#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "monoflow/commands.hpp"
#include "monoflow/config.hpp"

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct FlagTable {
  std::optional<std::string> config;
  std::vector<std::pair<std::string, std::string>> bound;  // key, value
  std::vector<std::string> sets;
};

void add_flag(CLI::App* app, FlagTable& t, std::vector<std::optional<std::string>>& slots, const std::string& flag,
              const std::string& key, const std::string& help) {
  slots.emplace_back();
  const auto idx = slots.size() - 1;
  app->add_option_function<std::string>(
      flag, [&slots, idx](const std::string& v) { slots[idx] = v; }, help);
  t.bound.emplace_back(key, "");
}

void add_common(CLI::App* app, FlagTable& t, std::vector<std::optional<std::string>>& slots) {
  app->add_option("-c,--config", t.config, "INI-style config file");
  add_flag(app, t, slots, "--scenario", "run.scenario", "catalog scenario name");
  add_flag(app, t, slots, "--scheme", "run.scheme", "constrained|truncation|penalty|fixed_obstacle|unconstrained");
  add_flag(app, t, slots, "--T", "run.T", "final time");
  add_flag(app, t, slots, "--n-steps", "run.n_steps", "number of time steps");
  add_flag(app, t, slots, "--tau", "run.tau", "time step (must divide T)");
  add_flag(app, t, slots, "-o,--output", "run.output_dir", "output directory");
  add_flag(app, t, slots, "--alpha-schedule", "run.alpha_schedule", "inverse_tau|power:p[,c]|constant:a");
  add_flag(app, t, slots, "--n-cells", "grid.n_cells", "number of grid cells");
  add_flag(app, t, slots, "--kkt-tol", "solver.kkt_tol", "KKT tolerance");
  add_flag(app, t, slots, "--max-iter", "solver.max_iter", "inner iteration cap");
  add_flag(app, t, slots, "--method", "solver.method", "active_set|projected_sor");
  add_flag(app, t, slots, "--prox", "solver.prox", "lumped|consistent");
  app->add_option("--set", t.sets, "override any key: section.key=value");
}

Overrides collect(const FlagTable& t, const std::vector<std::optional<std::string>>& slots) {
  Overrides out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) out.emplace_back(t.bound[i].first, *slots[i]);
  }
  for (const auto& s : t.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw monoflow::ConfigError("--set expects section.key=value, got '" + s + "'");
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unilateral gradient flows of 1D quadratic energies"};
  app.set_version_flag("--version", std::string(monoflow::kVersion));
  app.require_subcommand(1);

  FlagTable table;
  std::vector<std::optional<std::string>> slots;
  slots.reserve(64);
  table.bound.reserve(64);

  auto* simulate = app.add_subcommand("simulate", "run one scheme and write trajectory, steps, ledger and summary");
  auto* study = app.add_subcommand("study", "tau-refinement study across schemes");
  auto* verify = app.add_subcommand("verify", "certify a trajectory CSV against the energy balance");
  auto* scenarios = app.add_subcommand("scenarios", "list the scenario catalog");

  for (auto* sub : {simulate, study, verify}) add_common(sub, table, slots);
  add_flag(study, table, slots, "--n-steps-list", "study.n_steps_list", "comma-separated step counts");
  add_flag(study, table, slots, "--tau-list", "study.tau_list", "comma-separated time steps");
  add_flag(study, table, slots, "--schemes", "study.schemes", "comma-separated scheme kinds");
  add_flag(verify, table, slots, "-t,--trajectory", "verify.trajectory", "trajectory CSV to verify");

  CLI11_PARSE(app, argc, argv);

  if (scenarios->parsed()) return monoflow::cmd_scenarios(std::cout);
  try {
    const auto cfg = monoflow::parse_config(table.config, collect(table, slots));
    if (simulate->parsed()) return monoflow::cmd_simulate(cfg, std::cout);
    if (study->parsed()) return monoflow::cmd_study(cfg, std::cout);
    return monoflow::cmd_verify(cfg, std::cout);
  } catch (const monoflow::InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return monoflow::exit_code::kConfigError;
  }
}
