#include "fracdnl/config.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "fracdnl/errors.hpp"
#include "fracdnl/io.hpp"

namespace fracdnl {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + v + "'", line);
    }
}

int to_int(const std::string& v, int line) {
    const double x = to_double(v, line);
    const int i = static_cast<int>(x);
    if (i != x) throw ConfigError("not an integer: '" + v + "'", line);
    return i;
}

bool to_bool(const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("not a boolean: '" + v + "'", line);
}

}  // namespace

void apply_preset(RunConfig& cfg, const std::string& name) {
    cfg.preset = name;
    cfg.g = "zero";
    cfg.lambda_g = 0.0;
    cfg.q = 3.0;
    cfg.theta = 0.5;
    cfg.T = 1.0;
    cfg.L = 1.0;
    cfg.v0 = "auto";
    cfg.v0_jump = 0.3;
    if (name == "stefan") {
        cfg.alpha = "stefan";
        cfg.beta = "zero";
        cfg.u0 = "pos_sine2";
    } else if (name == "porous_medium") {
        cfg.alpha = "power";
        cfg.beta = "zero";
        cfg.u0 = "sine1";
    } else if (name == "hele_shaw") {
        cfg.alpha = "heaviside";
        cfg.beta = "zero";
        cfg.u0 = "pos_sine2";
    } else if (name == "linear_heat") {
        cfg.alpha = "identity";
        cfg.beta = "zero";
        cfg.u0 = "sine1";
    } else if (name == "lipschitz_demo") {
        cfg.alpha = "identity";
        cfg.beta = "arctan";
        cfg.u0 = "half_sine1";
    } else if (name == "custom") {
        // keep whatever the file sets
    } else {
        throw ConfigError("unknown preset: " + name);
    }
}

std::vector<PresetInfo> list_presets() {
    return {
        {"stefan", "two-phase Stefan enthalpy graph (id + Heaviside), zero beta"},
        {"porous_medium", "power-law alpha |r|^{p-2} r with p in (1,2), zero beta"},
        {"hele_shaw", "Heaviside alpha, zero beta"},
        {"linear_heat", "identity alpha, zero beta (linear fractional heat)"},
        {"lipschitz_demo", "identity alpha, arctan beta; contraction-window demo"},
    };
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;

    // Presets must take effect before overrides, regardless of key order:
    // two passes.
    std::vector<std::tuple<std::string, std::string, std::string, int>> kvs;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("malformed section header", line);
            section = s.substr(1, s.size() - 2);
            if (section != "problem" && section != "solver" && section != "study" &&
                section != "output") {
                throw ConfigError("unknown section: [" + section + "]", line);
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", line);
        if (section.empty()) throw ConfigError("key outside any section", line);
        kvs.emplace_back(section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line);
    }

    for (const auto& [sec, key, val, ln] : kvs) {
        if (sec == "problem" && key == "preset") apply_preset(cfg, val);
    }

    for (const auto& [sec, key, val, ln] : kvs) {
        if (sec == "problem") {
            if (key == "preset") continue;
            else if (key == "alpha") cfg.alpha = val;
            else if (key == "beta") cfg.beta = val;
            else if (key == "p") cfg.p = to_double(val, ln);
            else if (key == "g") cfg.g = val;
            else if (key == "lambda_g") cfg.lambda_g = to_double(val, ln);
            else if (key == "q") cfg.q = to_double(val, ln);
            else if (key == "u0") cfg.u0 = val;
            else if (key == "v0") cfg.v0 = val;
            else if (key == "v0_jump") cfg.v0_jump = to_double(val, ln);
            else if (key == "theta") cfg.theta = to_double(val, ln);
            else if (key == "T") cfg.T = to_double(val, ln);
            else if (key == "L") cfg.L = to_double(val, ln);
            else throw ConfigError("unknown key in [problem]: " + key, ln);
        } else if (sec == "solver") {
            if (key == "eps") cfg.solver.eps = to_double(val, ln);
            else if (key == "nu") cfg.solver.nu = to_double(val, ln);
            else if (key == "n") cfg.solver.n = to_int(val, ln);
            else if (key == "M") cfg.solver.M = to_int(val, ln);
            else if (key == "tol") cfg.solver.tol = to_double(val, ln);
            else if (key == "budget") cfg.solver.budget = to_int(val, ln);
            else if (key == "oversample") cfg.solver.oversample = to_int(val, ln);
            else if (key == "kind") {
                if (val == "newton") cfg.solver.kind = SolverParams::Kind::newton;
                else if (val == "relaxed") cfg.solver.kind = SolverParams::Kind::relaxed;
                else throw ConfigError("solver kind must be newton|relaxed", ln);
            } else throw ConfigError("unknown key in [solver]: " + key, ln);
        } else if (sec == "study") {
            if (key == "kind") cfg.study = val;
            else if (key == "halvings") cfg.halvings = to_int(val, ln);
            else if (key == "start") cfg.start = to_double(val, ln);
            else throw ConfigError("unknown key in [study]: " + key, ln);
        } else {  // output
            if (key == "dir") cfg.out_dir = val;
            else if (key == "emit_plot_data") cfg.emit_plot_data = to_bool(val, ln);
            else throw ConfigError("unknown key in [output]: " + key, ln);
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[problem]\n";
    os << "preset = " << cfg.preset << "\n";
    os << "alpha = " << cfg.alpha << "\n";
    os << "beta = " << cfg.beta << "\n";
    os << "p = " << format_g17(cfg.p) << "\n";
    os << "g = " << cfg.g << "\n";
    os << "lambda_g = " << format_g17(cfg.lambda_g) << "\n";
    os << "q = " << format_g17(cfg.q) << "\n";
    os << "u0 = " << cfg.u0 << "\n";
    os << "v0 = " << cfg.v0 << "\n";
    os << "v0_jump = " << format_g17(cfg.v0_jump) << "\n";
    os << "theta = " << format_g17(cfg.theta) << "\n";
    os << "T = " << format_g17(cfg.T) << "\n";
    os << "L = " << format_g17(cfg.L) << "\n";
    os << "[solver]\n";
    os << "eps = " << format_g17(cfg.solver.eps) << "\n";
    os << "nu = " << format_g17(cfg.solver.nu) << "\n";
    os << "n = " << cfg.solver.n << "\n";
    os << "M = " << cfg.solver.M << "\n";
    os << "tol = " << format_g17(cfg.solver.tol) << "\n";
    os << "budget = " << cfg.solver.budget << "\n";
    os << "kind = " << (cfg.solver.kind == SolverParams::Kind::newton ? "newton" : "relaxed")
       << "\n";
    os << "oversample = " << cfg.solver.oversample << "\n";
    os << "[study]\n";
    os << "kind = " << cfg.study << "\n";
    os << "halvings = " << cfg.halvings << "\n";
    os << "start = " << format_g17(cfg.start) << "\n";
    os << "[output]\n";
    os << "dir = " << cfg.out_dir << "\n";
    os << "emit_plot_data = " << (cfg.emit_plot_data ? "true" : "false") << "\n";
    return os.str();
}

ProblemSpec make_problem(const RunConfig& cfg) {
    ProblemSpec spec;
    spec.name = cfg.preset;
    spec.domain.kind = Domain::Kind::interval;
    spec.domain.Lx = cfg.L;
    spec.T = cfg.T;
    spec.pair = rl_pair(cfg.theta);
    spec.alpha = built_in(cfg.alpha, {{"p", cfg.p}});
    spec.beta = built_in(cfg.beta, {{"p", cfg.p}});

    if (cfg.g == "zero") {
        spec.g.g = [](double, double, double, double) { return 0.0; };
        spec.g.lambda_g = 0.0;
    } else if (cfg.g == "sinu") {
        const double lg = cfg.lambda_g;
        spec.g.g = [lg](double, double, double, double u) { return lg * std::sin(u); };
        spec.g.lambda_g = lg;
    } else {
        throw ConfigError("unknown g: " + cfg.g);
    }
    spec.g.q = cfg.q;

    const double L = cfg.L;
    if (cfg.u0 == "zero") {
        spec.u0 = [](double, double) { return 0.0; };
    } else if (cfg.u0 == "sine1") {
        spec.u0 = [L](double x, double) { return std::sin(M_PI * x / L); };
    } else if (cfg.u0 == "half_sine1") {
        spec.u0 = [L](double x, double) { return 0.5 * std::sin(M_PI * x / L); };
    } else if (cfg.u0 == "pos_sine2") {
        spec.u0 = [L](double x, double) { return std::max(0.0, std::sin(2.0 * M_PI * x / L)); };
    } else {
        throw ConfigError("unknown u0: " + cfg.u0);
    }

    if (cfg.v0 == "zero") {
        spec.v0 = [](double, double) { return 0.0; };
    } else if (cfg.v0 == "auto") {
        // Minimal section of alpha at u0; on jump nodes the configured
        // interior value, clamped into the jump image.
        const ScalarGraph alpha = spec.alpha;
        auto u0 = spec.u0;
        const double vj = cfg.v0_jump;
        spec.v0 = [alpha, u0, vj](double x, double y) {
            const double u = u0(x, y);
            for (const auto& j : alpha.jumps) {
                if (std::abs(u - j.s) <= 1e-12) return std::clamp(vj, j.lo, j.hi);
            }
            return minimal_section(alpha, u);
        };
    } else {
        throw ConfigError("unknown v0: " + cfg.v0);
    }
    return spec;
}

ProblemSpec preset_problem(const std::string& name, double p) {
    RunConfig cfg;
    apply_preset(cfg, name);
    cfg.p = p;
    return make_problem(cfg);
}

}  // namespace fracdnl
