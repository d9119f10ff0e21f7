#pragma once

#include <string>

#include "fracdnl/config.hpp"
#include "fracdnl/continuation.hpp"
#include "fracdnl/diagnostics.hpp"

namespace fracdnl {

// Trajectory CSV: m, t, z_1..z_n, u_1..u_n; 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);

// Study table CSV: kind, param, diff_l2, diff_l32, ratio, extra, completed, hash.
std::string study_csv(const StudyTable& table);

// Long-format per-step energy terms for plotting: step, t, term, value.
std::string energy_plot_csv(const Trajectory& traj, const EnergyReport& rep);

// Run manifest: tool version, config hash, derived constants, validation
// results, per-step iteration counts, diagnostics block.
std::string manifest_json(const RunConfig& cfg, const ProblemSpec& spec, const Constants& cst,
                          const std::vector<Violation>& violations, const Trajectory* traj,
                          const EnergyReport* energy);

extern const char* kToolVersion;

}  // namespace fracdnl
