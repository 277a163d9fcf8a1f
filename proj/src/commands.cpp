#include "monoflow/commands.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include "json.hpp"
#include "monoflow/errors.hpp"
#include "monoflow/io.hpp"

namespace monoflow {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(format_double(v)); }

Json config_echo(const RunConfig& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : cfg.echo()) j[k] = v;
  return j;
}

Json metadata() {
  return {
      {"prox_metric", "lumped mass M_L in the proximal term"},
      {"load", "consistent full mass applied to nodal forcing values"},
      {"slope_evaluation", "right endpoint u_{k+1} with fbar_k"},
      {"ledger_dissipation", "D uses the consistent mass; D_lumped and S enter the slope-form residual"},
      {"forcing_average", "Gauss-Legendre in time when a polynomial degree is declared, else 8-panel midpoint"},
  };
}

Json scenario_json(const Scenario& s, const TimeGrid& tg) {
  return {{"name", s.name},
          {"description", s.description},
          {"x_left", s.grid.x_left()},
          {"x_right", s.grid.x_right()},
          {"n_cells", s.grid.n_cells()},
          {"diffusion", s.coefficients.diffusion.description},
          {"reaction", s.coefficients.reaction.description},
          {"forcing", s.forcing.description()},
          {"smoothness", to_string(s.forcing.smoothness())},
          {"T", tg.T},
          {"n_steps", tg.n_steps},
          {"tau", tg.tau()}};
}

Json report_json(const VerificationReport& r) {
  return {{"verdict", r.verdict()},
          {"certified", r.certified()},
          {"reasons", r.reasons},
          {"pde_residual_sup", number(r.pde_residual_sup)},
          {"pde_threshold", number(r.pde_threshold)},
          {"pvi_violation", number(r.pvi_violation)},
          {"pvi_threshold", number(r.pvi_threshold)},
          {"energy_residual_final", number(r.energy_residual_final)},
          {"energy_threshold", number(r.energy_threshold)}};
}

void prepare_output(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir);
}

std::string path_in(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

void write_json(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const SchemaError& e) {
    log << "schema error: " << e.what() << "\n";
    return exit_code::kConfigError;
  } catch (const InvalidInput& e) {
    log << "config error: " << e.what() << "\n";
    return exit_code::kConfigError;
  } catch (const StepFailure& e) {
    log << "solver failure: " << e.what() << "\n";
    return exit_code::kSolverFailure;
  } catch (const std::runtime_error& e) {
    log << "error: " << e.what() << "\n";
    return exit_code::kConfigError;
  }
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::vector<std::string> header{"k", "t"};
  for (std::size_t i = 1; i <= traj.grid().interior_count(); ++i) header.push_back("x_" + std::to_string(i));
  CsvWriter w(header);
  for (int k = 0; k <= traj.tg.n_steps; ++k) {
    std::vector<double> row{static_cast<double>(k), traj.tg.t(k)};
    const auto& u = traj.states[static_cast<std::size_t>(k)].values;
    row.insert(row.end(), u.begin(), u.end());
    w.row(row);
  }
  return w.str();
}

std::string steps_csv(const Trajectory& traj) {
  CsvWriter w({"k", "t", "speed_norm", "slope_at", "energy_after", "power_term", "active_count", "inner_iterations",
               "kkt_residual"});
  for (const auto& s : traj.steps) {
    w.row({static_cast<double>(s.k), traj.tg.t(s.k + 1), s.speed_norm, s.slope_at, s.energy_after, s.power_term,
           static_cast<double>(s.active_count), static_cast<double>(s.inner_iterations), s.kkt_residual});
  }
  return w.str();
}

std::string ledger_csv(const EnergyLedger& L) {
  CsvWriter w({"k", "t", "E", "D", "S", "P", "R"});
  for (std::size_t k = 0; k < L.size(); ++k) w.row({static_cast<double>(k), L.t[k], L.E[k], L.D[k], L.S[k], L.P[k], L.R[k]});
  return w.str();
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    const auto s = resolve_scenario(cfg);
    const auto tg = make_time_grid(resolved_T(cfg, s), resolved_n_steps(cfg, s));
    const auto sc = scheme_config(cfg);
    prepare_output(cfg.output_dir);
    const auto op = assemble(s.grid, s.coefficients);

    Json summary = {{"version", kVersion}, {"command", "simulate"}, {"config", config_echo(cfg)},
                    {"metadata", metadata()}, {"scenario", scenario_json(s, tg)}};
    summary["scheme"] = {{"kind", to_string(sc.kind)}, {"alpha_schedule", sc.alpha_schedule.description}};

    Trajectory traj;
    try {
      traj = run(op, s.forcing, s.u0, tg, sc);
    } catch (const StepFailure& e) {
      summary["result"] = {{"status", "solver_failure"},
                           {"failing_step", e.step()},
                           {"reason", e.what()},
                           {"residual", number(e.residual())}};
      write_json(path_in(cfg.output_dir, "summary.json"), summary);
      log << "solver failure: " << e.what() << "\n";
      return exit_code::kSolverFailure;
    }

    const auto ledger = energy_ledger(traj, op, s.forcing);
    if (cfg.emit.trajectory) write_text_file(path_in(cfg.output_dir, "trajectory.csv"), trajectory_csv(traj));
    if (cfg.emit.steps) write_text_file(path_in(cfg.output_dir, "steps.csv"), steps_csv(traj));
    if (cfg.emit.ledger) write_text_file(path_in(cfg.output_dir, "ledger.csv"), ledger_csv(ledger));

    double max_kkt = 0.0;
    long iterations = 0;
    for (const auto& st : traj.steps) {
      max_kkt = std::max(max_kkt, st.kkt_residual);
      iterations += st.inner_iterations;
    }
    if (sc.kind == SchemeKind::Penalty) {
      summary["scheme"]["alpha"] = traj.alpha;
      summary["scheme"]["violation_bound"] = std::max(0.0, -traj.min_increment);
    }
    summary["result"] = {{"status", "ok"},
                         {"final_energy", number(ledger.E.back())},
                         {"energy_residual", number(ledger.R.back())},
                         {"residual_curve", number(ledger.residual_curve.back())},
                         {"min_increment", number(traj.min_increment)},
                         {"max_kkt_residual", number(max_kkt)},
                         {"inner_iterations", iterations}};
    if (cfg.emit.report) summary["verification"] = report_json(verify_trajectory(traj, op, s.forcing));
    write_json(path_in(cfg.output_dir, "summary.json"), summary);
    log << "simulated " << s.name << " with " << to_string(sc.kind) << ": " << tg.n_steps << " steps, E(T) = "
        << format_double(ledger.E.back()) << ", R(T) = " << format_double(ledger.R.back()) << "\n";
    return exit_code::kOk;
  });
}

int cmd_study(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    if (cfg.study_n_steps.empty()) throw ConfigError("study needs 'study.n_steps_list' or 'study.tau_list'");
    const auto s = resolve_scenario(cfg);
    const double T = resolved_T(cfg, s);
    const auto sc = scheme_config(cfg);
    prepare_output(cfg.output_dir);
    const auto op = assemble(s.grid, s.coefficients);
    const auto study = convergence_study(op, s.forcing, s.u0, T, cfg.study_n_steps, cfg.study_schemes, sc);

    CsvWriter w({"n_steps", "tau", "scheme", "cauchy_gap", "cross_distance", "energy_residual", "slope_integral",
                 "speed_integral"});
    for (const auto& r : study.rows) {
      w.text_row({std::to_string(r.n_steps), format_double(r.tau), to_string(r.kind), format_double(r.cauchy_gap),
                  format_double(r.cross_distance), format_double(r.energy_residual), format_double(r.slope_integral),
                  format_double(r.speed_integral)});
    }
    w.save(path_in(cfg.output_dir, "study.csv"));

    Json ratios = Json::object();
    for (std::size_t j = 0; j < study.kinds.size(); ++j) {
      Json list = Json::array();
      for (double r : study.ratios[j]) list.push_back(number(r));
      ratios[to_string(study.kinds[j])] = list;
    }
    auto verdict = [&](bool ok) { return study.applicable ? Json(ok ? "pass" : "fail") : Json("not_applicable"); };
    Json summary = {{"version", kVersion},
                    {"command", "study"},
                    {"config", config_echo(cfg)},
                    {"metadata", metadata()},
                    {"scenario", scenario_json(s, make_time_grid(T, cfg.study_n_steps.back()))},
                    {"cauchy_ratios", ratios},
                    {"cauchy_ratio_bound", kCauchyRatioBound},
                    {"cauchy_ratios_verdict", verdict(study.ratios_pass)},
                    {"cross_ratio", number(study.cross_ratio)},
                    {"cross_factor_bound", kCrossAgreementFactor},
                    {"cross_verdict", cfg.study_n_steps.size() >= 2
                                          ? Json(study.cross_pass ? "pass" : "fail")
                                          : Json("not_applicable")}};
    write_json(path_in(cfg.output_dir, "study_summary.json"), summary);
    log << "study of " << s.name << ": " << study.rows.size() << " runs, ratios "
        << summary["cauchy_ratios_verdict"].get<std::string>() << "\n";
    return exit_code::kOk;
  });
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  return guarded(log, [&] {
    if (cfg.trajectory_path.empty()) throw ConfigError("verify needs a trajectory file");
    const auto s = resolve_scenario(cfg);
    prepare_output(cfg.output_dir);
    const auto op = assemble(s.grid, s.coefficients);
    const auto traj = load_trajectory(cfg.trajectory_path, s.grid);
    const auto rep = verify_trajectory(traj, op, s.forcing);
    Json report = {{"version", kVersion},
                   {"command", "verify"},
                   {"config", config_echo(cfg)},
                   {"metadata", metadata()},
                   {"scenario", scenario_json(s, traj.tg)},
                   {"trajectory", cfg.trajectory_path}};
    report["report"] = report_json(rep);
    write_json(path_in(cfg.output_dir, "report.json"), report);
    log << rep.verdict() << "\n";
    return rep.certified() ? exit_code::kOk : exit_code::kRejected;
  });
}

int cmd_scenarios(std::ostream& out) {
  for (const auto& name : scenario_names()) out << name << "\t" << scenario_description(name) << "\n";
  return exit_code::kOk;
}

}  // namespace monoflow
