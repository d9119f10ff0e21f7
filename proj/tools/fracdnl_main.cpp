#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "fracdnl/artifacts.hpp"
#include "fracdnl/errors.hpp"
#include "fracdnl/io.hpp"

namespace {

using namespace fracdnl;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIo = 3;

struct Common {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    bool emit_plot_data = false;
};

RunConfig load(const Common& c) {
    RunConfig cfg = load_config(c.config_path);
    if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
    if (c.emit_plot_data) cfg.emit_plot_data = true;
    return cfg;
}

int run_validate(const Common& c, bool quiet = false) {
    const RunConfig cfg = load(c);
    const ProblemSpec spec = make_problem(cfg);
    Eigenbasis basis(spec.domain, cfg.solver.n, cfg.solver.oversample);
    const auto violations = validate(spec, basis);
    bool bad = false;
    for (const auto& v : violations) {
        if (!quiet) {
            std::fprintf(v.error ? stderr : stdout, "%s: %s\n", v.error ? "error" : "warning",
                         v.what.c_str());
        }
        bad = bad || v.error;
    }
    return bad ? kExitValidation : kExitOk;
}

int run_solve(const Common& c) {
    const RunConfig cfg = load(c);
    const ProblemSpec spec = make_problem(cfg);
    Eigenbasis basis(spec.domain, cfg.solver.n, cfg.solver.oversample);
    const auto violations = validate(spec, basis);
    for (const auto& v : violations) {
        if (v.error) {
            std::fprintf(stderr, "error: %s\n", v.what.c_str());
            return kExitValidation;
        }
    }
    const Constants cst = constants(spec, basis);
    const SolveOutcome out = solve_retaining_partial(spec, cfg.solver, basis);
    const std::string dir = cfg.out_dir;
    write_file_atomic(dir + "/trajectory.csv", trajectory_csv(out.trajectory));
    if (out.completed) {
        const EnergyReport rep = energy_report(spec, cfg.solver, basis, out.trajectory);
        write_file_atomic(dir + "/manifest.json",
                          manifest_json(cfg, spec, cst, violations, &out.trajectory, &rep));
        if (cfg.emit_plot_data) {
            write_file_atomic(dir + "/energy.csv", energy_plot_csv(out.trajectory, rep));
        }
        return kExitOk;
    }
    write_file_atomic(dir + "/manifest.json",
                      manifest_json(cfg, spec, cst, violations, &out.trajectory, nullptr));
    std::fprintf(stderr, "solver failure: %s\n", out.error.c_str());
    return kExitSolver;
}

std::vector<double> halved(double start, int count) {
    std::vector<double> seq;
    for (int i = 0; i < count; ++i) seq.push_back(start / static_cast<double>(1 << i));
    return seq;
}

int run_study(const Common& c, const std::string& kind_flag) {
    const RunConfig cfg = load(c);
    const std::string kind = kind_flag.empty() ? cfg.study : kind_flag;
    const ProblemSpec spec = make_problem(cfg);
    const std::string dir = cfg.out_dir;
    const int rows = cfg.halvings + 1;

    if (kind == "eps" || kind == "nu" || kind == "n" || kind == "h") {
        StudyTable table;
        if (kind == "eps") {
            table = eps_study(spec, cfg.solver, halved(cfg.start, rows));
        } else if (kind == "nu") {
            table = nu_study(spec, cfg.solver, halved(cfg.start, rows));
        } else if (kind == "n") {
            std::vector<int> seq;
            for (int i = 0; i < rows; ++i) seq.push_back(cfg.solver.n * (1 << i));
            table = n_study(spec, cfg.solver, seq);
        } else {
            std::vector<int> seq;
            for (int i = 0; i < rows; ++i) seq.push_back(cfg.solver.M * (1 << i));
            table = h_study(spec, cfg.solver, seq);
        }
        write_file_atomic(dir + "/study_" + kind + ".csv", study_csv(table));
        for (const auto& r : table.rows) {
            if (!r.completed) return kExitSolver;
        }
        return kExitOk;
    }
    if (kind == "uniqueness") {
        Eigenbasis basis(spec.domain, cfg.solver.n, cfg.solver.oversample);
        const Constants cst = constants(spec, basis);
        const UniquenessResult res =
            uniqueness_experiment(spec, cfg.solver, halved(cfg.start, rows));
        std::string csv = "delta,total_l2,ratio\n";
        for (std::size_t i = 0; i < res.deltas.size(); ++i) {
            csv += format_g17(res.deltas[i]) + "," + format_g17(res.total_norms[i]) + "," +
                   format_g17(i > 0 && i - 1 < res.halving_ratios.size()
                                  ? res.halving_ratios[i - 1]
                                  : -1.0) +
                   "\n";
        }
        write_file_atomic(dir + "/study_uniqueness.csv", csv);
        write_file_atomic(dir + "/manifest.json",
                          manifest_json(cfg, spec, cst, {}, nullptr, nullptr));
        return kExitOk;
    }
    if (kind == "mosco") {
        Eigenbasis basis(spec.domain, cfg.solver.n, cfg.solver.oversample);
        std::vector<double> sample;
        for (Eigen::Index k = 0; k < basis.node_count(); ++k) {
            sample.push_back(spec.u0(basis.node_x()[k], 0.0));
        }
        const MoscoTable table =
            mosco_desk_check(spec.alpha, halved(cfg.start, rows), {sample});
        std::string csv = "eps,psi,psi_limit\n";
        for (std::size_t i = 0; i < table.eps_seq.size(); ++i) {
            csv += format_g17(table.eps_seq[i]) + "," + format_g17(table.psi[0][i]) + "," +
                   format_g17(table.psi_limit[0]) + "\n";
        }
        write_file_atomic(dir + "/study_mosco.csv", csv);
        return kExitOk;
    }
    std::fprintf(stderr, "error: unknown study kind '%s'\n", kind.c_str());
    return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-fractional doubly nonlinear solver"};
    app.require_subcommand(1);

    Common common;
    std::string study_kind;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", common.config_path, "configuration file");
        if (needs_config) opt->required();
        sub->add_option("--out", common.out_dir, "output directory (overrides config)");
        sub->add_option("--jobs", common.jobs, "parallelism degree");
        sub->add_flag("--emit-plot-data", common.emit_plot_data, "write long-format plot CSV");
    };

    auto* solve_cmd = app.add_subcommand("solve", "run one solve, write trajectory + manifest");
    add_common(solve_cmd, true);
    auto* study_cmd = app.add_subcommand("study", "run a refinement/limit study");
    add_common(study_cmd, true);
    study_cmd->add_option("--kind", study_kind, "eps|nu|n|h|uniqueness|mosco");
    auto* validate_cmd = app.add_subcommand("validate", "check standing assumptions");
    add_common(validate_cmd, true);
    auto* presets_cmd = app.add_subcommand("presets", "list built-in problem presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets_cmd->parsed()) {
            for (const auto& p : fracdnl::list_presets()) {
                std::printf("%-16s %s\n", p.name.c_str(), p.summary.c_str());
            }
            return kExitOk;
        }
        if (validate_cmd->parsed()) return run_validate(common);
        if (solve_cmd->parsed()) return run_solve(common);
        return run_study(common, study_kind);
    } catch (const fracdnl::ConfigError& e) {
        if (e.line > 0) std::fprintf(stderr, "config error (line %d): %s\n", e.line, e.what());
        else std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitValidation;
    } catch (const fracdnl::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const fracdnl::NumericalFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolver;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
}
