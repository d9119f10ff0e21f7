#pragma once

#include <string>
#include <vector>

#include "fracdnl/solver.hpp"

namespace fracdnl {

// Effective run configuration. A preset fills in problem defaults; any
// explicit key overrides them. Serialization is canonical (fixed key order,
// 17-digit numerics), so parse-serialize-parse is the identity.
struct RunConfig {
    // [problem]
    std::string preset = "stefan";
    std::string alpha = "stefan";
    std::string beta = "zero";
    double p = 1.5;          // exponent when alpha = power
    std::string g = "zero";  // zero | sinu
    double lambda_g = 0.0;
    double q = 3.0;
    std::string u0 = "pos_sine2";  // zero | sine1 | half_sine1 | pos_sine2
    std::string v0 = "auto";       // auto | zero
    double v0_jump = 0.3;          // v0 value on jump nodes under "auto"
    double theta = 0.5;
    double T = 1.0;
    double L = 1.0;

    // [solver]
    SolverParams solver;

    // [study]
    std::string study = "eps";  // eps | nu | n | h | uniqueness | mosco
    int halvings = 4;
    double start = 0.1;  // initial eps/nu or delta for the study

    // [output]
    std::string out_dir = "out";
    bool emit_plot_data = false;
};

// Line-oriented "key = value" sections; '#' comments. Unknown sections or
// keys raise ConfigError with the line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

// Problem defaults for a preset name; throws ConfigError on unknown names.
void apply_preset(RunConfig& cfg, const std::string& name);

struct PresetInfo {
    std::string name;
    std::string summary;
};
std::vector<PresetInfo> list_presets();

ProblemSpec make_problem(const RunConfig& cfg);

// Convenience: preset problem with the default configuration.
ProblemSpec preset_problem(const std::string& name, double p = 1.5);

}  // namespace fracdnl
