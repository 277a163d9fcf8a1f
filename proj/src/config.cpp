#include "monoflow/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "monoflow/diagnostics.hpp"
#include "monoflow/io.hpp"

namespace monoflow {

namespace {

const std::set<std::string> kKnownKeys = {
    "run.scenario",       "run.scheme",         "run.T",          "run.n_steps",       "run.tau",
    "run.output_dir",     "run.alpha_schedule", "grid.x_left",    "grid.x_right",      "grid.n_cells",
    "scenario.diffusion", "scenario.reaction",  "scenario.forcing_table", "scenario.forcing_interp",
    "scenario.u0",        "solver.kkt_tol",     "solver.max_iter", "solver.method",    "solver.sor_omega",
    "solver.prox",        "study.n_steps_list", "study.tau_list", "study.schemes",     "emit.trajectory",
    "emit.steps",         "emit.ledger",        "emit.report",    "verify.trajectory",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) return v.substr(1, v.size() - 2);
  return v;
}

double as_double(const std::string& key, const std::string& v) {
  try {
    const double d = parse_double(v);
    if (!std::isfinite(d)) throw InvalidInput("");
    return d;
  } catch (const InvalidInput&) {
    throw ConfigError("invalid value for '" + key + "': '" + v + "'");
  }
}

int as_int(const std::string& key, const std::string& v) {
  const double d = as_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError("'" + key + "' must be an integer, got '" + v + "'");
  return static_cast<int>(d);
}

bool as_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("'" + key + "' must be a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out;
}

template <class F>
auto wrap(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError("invalid value for '" + key + "': " + e.what());
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto opt = [&](const std::string& k, const auto& v, auto fmt) {
    if (v) out.emplace_back(k, fmt(*v));
  };
  auto num = [](double d) { return format_double(d); };
  auto str = [](const std::string& s) { return s; };
  out.emplace_back("run.scenario", scenario);
  out.emplace_back("run.scheme", to_string(scheme));
  opt("run.T", T, num);
  if (n_steps) out.emplace_back("run.n_steps", std::to_string(*n_steps));
  out.emplace_back("run.output_dir", output_dir);
  out.emplace_back("run.alpha_schedule", alpha_schedule);
  opt("grid.x_left", x_left, num);
  opt("grid.x_right", x_right, num);
  out.emplace_back("grid.n_cells", std::to_string(n_cells));
  opt("scenario.diffusion", diffusion, str);
  opt("scenario.reaction", reaction, str);
  opt("scenario.forcing_table", forcing_table, str);
  out.emplace_back("scenario.forcing_interp",
                   forcing_interp == ForcingSpec::TableInterpolation::Constant ? "constant" : "linear");
  opt("scenario.u0", u0_preset, str);
  out.emplace_back("solver.kkt_tol", format_double(solver.kkt_tol));
  out.emplace_back("solver.max_iter", std::to_string(solver.max_iter));
  out.emplace_back("solver.method", to_string(solver.method));
  out.emplace_back("solver.sor_omega", format_double(solver.sor_omega));
  out.emplace_back("solver.prox", to_string(solver.prox));
  std::vector<std::string> steps, schemes;
  for (int n : study_n_steps) steps.push_back(std::to_string(n));
  for (auto k : study_schemes) schemes.push_back(to_string(k));
  out.emplace_back("study.n_steps_list", join(steps));
  out.emplace_back("study.schemes", join(schemes));
  out.emplace_back("emit.trajectory", emit.trajectory ? "true" : "false");
  out.emplace_back("emit.steps", emit.steps ? "true" : "false");
  out.emplace_back("emit.ledger", emit.ledger ? "true" : "false");
  out.emplace_back("emit.report", emit.report ? "true" : "false");
  if (!trajectory_path.empty()) out.emplace_back("verify.trajectory", trajectory_path);
  return out;
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line, section = "run";
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line.substr(0, line.find_first_of("#;")));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(body.substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const auto key = section + "." + trim(body.substr(0, eq));
    if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
    kv[key] = unquote(trim(body.substr(eq + 1)));
  }
  for (const auto& [key, value] : overrides) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
    kv[key] = value;
  }

  RunConfig cfg;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto v = get("run.scenario")) cfg.scenario = *v;
  if (auto v = get("run.scheme")) cfg.scheme = wrap("run.scheme", [&] { return parse_scheme_kind(*v); });
  if (auto v = get("run.T")) {
    cfg.T = as_double("run.T", *v);
    if (!(*cfg.T > 0.0)) throw ConfigError("'run.T' must be positive");
  }
  if (auto v = get("run.n_steps")) {
    cfg.n_steps = as_int("run.n_steps", *v);
    if (*cfg.n_steps < 1) throw ConfigError("'run.n_steps' must be a positive integer");
  }
  if (auto v = get("run.output_dir")) cfg.output_dir = *v;
  if (auto v = get("run.alpha_schedule")) {
    wrap("run.alpha_schedule", [&] { return AlphaSchedule::parse(*v); });
    cfg.alpha_schedule = *v;
  }
  if (auto v = get("grid.x_left")) cfg.x_left = as_double("grid.x_left", *v);
  if (auto v = get("grid.x_right")) cfg.x_right = as_double("grid.x_right", *v);
  if (auto v = get("grid.n_cells")) {
    cfg.n_cells = as_int("grid.n_cells", *v);
    if (cfg.n_cells < 2) throw ConfigError("'grid.n_cells' must be at least 2");
  }
  if (auto v = get("scenario.diffusion")) {
    wrap("scenario.diffusion", [&] { return Coefficient::parse(*v); });
    cfg.diffusion = *v;
  }
  if (auto v = get("scenario.reaction")) {
    wrap("scenario.reaction", [&] { return Coefficient::parse(*v); });
    cfg.reaction = *v;
  }
  if (auto v = get("scenario.forcing_table")) cfg.forcing_table = *v;
  if (auto v = get("scenario.forcing_interp")) {
    if (*v == "constant") {
      cfg.forcing_interp = ForcingSpec::TableInterpolation::Constant;
    } else if (*v == "linear") {
      cfg.forcing_interp = ForcingSpec::TableInterpolation::Linear;
    } else {
      throw ConfigError("'scenario.forcing_interp' must be constant or linear");
    }
  }
  if (auto v = get("scenario.u0")) cfg.u0_preset = *v;

  if (auto v = get("solver.kkt_tol")) cfg.solver.kkt_tol = as_double("solver.kkt_tol", *v);
  if (auto v = get("solver.max_iter")) cfg.solver.max_iter = as_int("solver.max_iter", *v);
  if (auto v = get("solver.method")) {
    if (*v == "active_set") {
      cfg.solver.method = InnerMethod::ActiveSet;
    } else if (*v == "projected_sor") {
      cfg.solver.method = InnerMethod::ProjectedSor;
    } else {
      throw ConfigError("'solver.method' must be active_set or projected_sor");
    }
  }
  if (auto v = get("solver.sor_omega")) cfg.solver.sor_omega = as_double("solver.sor_omega", *v);
  if (auto v = get("solver.prox")) {
    if (*v == "lumped") {
      cfg.solver.prox = ProxMetric::Lumped;
    } else if (*v == "consistent") {
      cfg.solver.prox = ProxMetric::Consistent;
    } else {
      throw ConfigError("'solver.prox' must be lumped or consistent");
    }
  }
  wrap("solver", [&] {
    cfg.solver.validate();
    return 0;
  });

  if (auto v = get("study.schemes")) {
    cfg.study_schemes.clear();
    for (const auto& s : split_list(*v)) cfg.study_schemes.push_back(wrap("study.schemes", [&] { return parse_scheme_kind(s); }));
    if (cfg.study_schemes.empty()) throw ConfigError("'study.schemes' is empty");
  }
  if (auto v = get("study.n_steps_list")) {
    for (const auto& s : split_list(*v)) {
      const int n = as_int("study.n_steps_list", s);
      if (n < 1) throw ConfigError("'study.n_steps_list' entries must be positive");
      cfg.study_n_steps.push_back(n);
    }
  }

  if (auto v = get("emit.trajectory")) cfg.emit.trajectory = as_bool("emit.trajectory", *v);
  if (auto v = get("emit.steps")) cfg.emit.steps = as_bool("emit.steps", *v);
  if (auto v = get("emit.ledger")) cfg.emit.ledger = as_bool("emit.ledger", *v);
  if (auto v = get("emit.report")) cfg.emit.report = as_bool("emit.report", *v);
  if (auto v = get("verify.trajectory")) cfg.trajectory_path = *v;

  const auto scenario = wrap("run.scenario", [&] { return make_scenario(cfg.scenario, cfg.n_cells); });
  const double T = resolved_T(cfg, scenario);
  if (auto v = get("run.tau")) {
    const double tau = as_double("run.tau", *v);
    const auto n = wrap("run.tau", [&] { return steps_from_taus(T, {tau}); }).front();
    if (cfg.n_steps && *cfg.n_steps != n) {
      throw ConfigError("inconsistent 'run.tau' and 'run.n_steps': T / tau = " + std::to_string(n));
    }
    cfg.n_steps = n;
  }
  if (auto v = get("study.tau_list")) {
    std::vector<double> taus;
    for (const auto& s : split_list(*v)) taus.push_back(as_double("study.tau_list", s));
    const auto steps = wrap("study.tau_list", [&] { return steps_from_taus(T, taus); });
    if (get("study.n_steps_list") && steps != cfg.study_n_steps) {
      throw ConfigError("inconsistent 'study.tau_list' and 'study.n_steps_list'");
    }
    cfg.study_n_steps = steps;
  }
  for (std::size_t i = 1; i < cfg.study_n_steps.size(); ++i) {
    if (cfg.study_n_steps[i] <= cfg.study_n_steps[i - 1] || cfg.study_n_steps[i] % cfg.study_n_steps[i - 1] != 0) {
      throw ConfigError("study time steps must decrease and each must divide the previous one");
    }
  }
  if ((cfg.x_left || cfg.x_right) && !cfg.u0_preset) {
    throw ConfigError("a domain override needs 'scenario.u0' to define the initial datum");
  }
  return cfg;
}

RunConfig parse_config(const std::optional<std::string>& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::string text;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot read config file " + *path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config_text(text, overrides);
}

Scenario resolve_scenario(const RunConfig& cfg) {
  return wrap("scenario", [&] {
    Scenario s = make_scenario(cfg.scenario, cfg.n_cells);
    if (cfg.x_left || cfg.x_right) {
      s.grid = build_grid(cfg.x_left.value_or(s.grid.x_left()), cfg.x_right.value_or(s.grid.x_right()),
                          s.grid.n_cells());
      s.exact = {};
      s.exact_speed = {};
      s.reference.clear();
    }
    if (cfg.u0_preset) s.u0 = initial_preset(*cfg.u0_preset, s.grid);
    if (cfg.diffusion) s.coefficients.diffusion = Coefficient::parse(*cfg.diffusion);
    if (cfg.reaction) s.coefficients.reaction = Coefficient::parse(*cfg.reaction);
    if (cfg.forcing_table) s.forcing = load_forcing_table(*cfg.forcing_table, s.grid, cfg.forcing_interp);
    return s;
  });
}

double resolved_T(const RunConfig& cfg, const Scenario& s) { return cfg.T.value_or(s.T); }
int resolved_n_steps(const RunConfig& cfg, const Scenario& s) { return cfg.n_steps.value_or(s.n_steps); }

SchemeConfig scheme_config(const RunConfig& cfg) {
  SchemeConfig sc;
  sc.kind = cfg.scheme;
  sc.alpha_schedule = AlphaSchedule::parse(cfg.alpha_schedule);
  sc.solver = cfg.solver;
  return sc;
}

}  // namespace monoflow
