#include "fracdnl/artifacts.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "fracdnl/io.hpp"

namespace fracdnl {

const char* kToolVersion = "fracdnl 1.0.0";

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    const Eigen::Index n = traj.u.empty() ? 0 : traj.u[0].size();
    os << "m,t";
    for (Eigen::Index i = 0; i < n; ++i) os << ",z" << (i + 1);
    for (Eigen::Index i = 0; i < n; ++i) os << ",u" << (i + 1);
    os << "\n";
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        os << m << "," << format_g17(traj.times[m]);
        for (Eigen::Index i = 0; i < n; ++i) os << "," << format_g17(traj.z[m][i]);
        for (Eigen::Index i = 0; i < n; ++i) os << "," << format_g17(traj.u[m][i]);
        os << "\n";
    }
    return os.str();
}

std::string study_csv(const StudyTable& table) {
    std::ostringstream os;
    os << "kind,param,diff_l2,diff_l32,ratio,extra,completed,manifest_hash\n";
    for (const auto& r : table.rows) {
        os << table.kind << "," << format_g17(r.param) << "," << format_g17(r.diff_l2) << ","
           << format_g17(r.diff_l32) << "," << format_g17(r.ratio) << "," << format_g17(r.extra)
           << "," << (r.completed ? "true" : "false") << "," << r.manifest_hash << "\n";
    }
    return os.str();
}

std::string energy_plot_csv(const Trajectory& traj, const EnergyReport& rep) {
    std::ostringstream os;
    os << "step,t,term,value\n";
    for (std::size_t m = 0; m < rep.psi.size(); ++m) {
        const double t = traj.times[m];
        os << m << "," << format_g17(t) << ",psi," << format_g17(rep.psi[m]) << "\n";
        os << m << "," << format_g17(t) << ",ell_conv_v," << format_g17(rep.conv_v[m]) << "\n";
        os << m << "," << format_g17(t) << ",ell_conv_w," << format_g17(rep.conv_w[m]) << "\n";
    }
    return os.str();
}

std::string manifest_json(const RunConfig& cfg, const ProblemSpec& spec, const Constants& cst,
                          const std::vector<Violation>& violations, const Trajectory* traj,
                          const EnergyReport* energy) {
    nlohmann::ordered_json j;
    j["tool"] = kToolVersion;
    j["config_hash"] = fnv1a_hash(serialize_config(cfg));
    j["problem"] = {{"name", spec.name}, {"theta", spec.pair.theta}, {"T", spec.T},
                    {"L", spec.domain.Lx}};
    j["constants"]["c_V"] = cst.c_V;
    j["constants"]["C_G"] = cst.C_G;
    if (cst.tau_window) {
        j["constants"]["tau"] = *cst.tau_window;
    } else {
        j["constants"]["tau_note"] = cst.note;
    }
    j["constants"]["ell_l1_T"] = cst.ell_l1_T;
    j["solver"] = {{"eps", cfg.solver.eps},
                   {"nu", cfg.solver.nu},
                   {"n", cfg.solver.n},
                   {"M", cfg.solver.M},
                   {"tol", cfg.solver.tol},
                   {"budget", cfg.solver.budget},
                   {"kind", cfg.solver.kind == SolverParams::Kind::newton ? "newton" : "relaxed"},
                   {"oversample", cfg.solver.oversample}};
    auto& viol = j["validation"] = nlohmann::ordered_json::array();
    for (const auto& v : violations) {
        viol.push_back({{"severity", v.error ? "error" : "warning"}, {"what", v.what}});
    }
    if (traj != nullptr) {
        j["run"]["steps"] = traj->steps();
        j["run"]["h"] = traj->h;
        auto& iters = j["run"]["iterations"] = nlohmann::ordered_json::array();
        for (const auto& s : traj->stats) iters.push_back(s.iterations);
        double worst = 0.0;
        for (const auto& s : traj->stats) worst = std::max(worst, s.residual);
        j["run"]["max_residual"] = worst;
    }
    if (energy != nullptr) {
        j["diagnostics"]["energy_ok"] = energy->ok;
        j["diagnostics"]["energy_partial"] = energy->partial;
        j["diagnostics"]["energy_bound"] = energy->bound;
        j["diagnostics"]["energy_slack"] = energy->slack;
        j["diagnostics"]["violations"] = energy->violations;
    }
    return j.dump(2) + "\n";
}

}  // namespace fracdnl
