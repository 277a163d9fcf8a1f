#pragma once

#include <iosfwd>
#include <string>

#include "monoflow/config.hpp"
#include "monoflow/diagnostics.hpp"
#include "monoflow/evolution.hpp"

namespace monoflow {

inline constexpr const char* kVersion = "monoflow 1.0.0";

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kRejected = 2;
inline constexpr int kSolverFailure = 3;
inline constexpr int kConfigError = 4;
}  // namespace exit_code

/// "k,t,x_1,...,x_m"
std::string trajectory_csv(const Trajectory& traj);
/// One row per step report.
std::string steps_csv(const Trajectory& traj);
/// "k,t,E,D,S,P,R"
std::string ledger_csv(const EnergyLedger& ledger);

/// Writes trajectory.csv, steps.csv, ledger.csv and summary.json into cfg.output_dir.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
/// Writes study.csv and study_summary.json.
int cmd_study(const RunConfig& cfg, std::ostream& log);
/// Verifies cfg.trajectory_path and writes report.json.
int cmd_verify(const RunConfig& cfg, std::ostream& log);
/// Lists the scenario catalog.
int cmd_scenarios(std::ostream& out);

}  // namespace monoflow
