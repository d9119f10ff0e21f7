#include "fracdnl/continuation.hpp"

#include <cmath>
#include <sstream>

#include "fracdnl/errors.hpp"
#include "fracdnl/io.hpp"

namespace fracdnl {

namespace {

std::string row_hash(const ProblemSpec& spec, const SolverParams& p, const std::string& kind,
                     double param) {
    std::ostringstream os;
    os << kind << ";" << spec.name << ";theta=" << spec.pair.theta << ";T=" << spec.T
       << ";n=" << p.n << ";M=" << p.M << ";eps=" << p.eps << ";nu=" << p.nu
       << ";param=" << format_g17(param);
    std::ostringstream hex;
    hex << std::hex << fnv1a_hash(os.str());
    return hex.str();
}

// Zero-pad modal vectors to a common length (n_study crosses basis sizes;
// the sine modes are nested).
Eigen::VectorXd pad(const Eigen::VectorXd& v, Eigen::Index n) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    out.head(v.size()) = v;
    return out;
}

struct RunDiff {
    double l2 = 0.0;
    double l32 = 0.0;
};

// Discrete L^2(Q) and L^{3/2}(0,T;H) distances on a shared time grid;
// `stride_a`/`stride_b` subsample finer runs onto the coarse grid.
RunDiff diff_runs(const Trajectory& a, const Trajectory& b, int stride_a, int stride_b) {
    const int steps = std::min(a.steps() / stride_a, b.steps() / stride_b);
    const double h = a.h * stride_a;
    const Eigen::Index n = std::max(a.u[0].size(), b.u[0].size());
    RunDiff d;
    for (int m = 1; m <= steps; ++m) {
        const double nrm = (pad(a.u[m * stride_a], n) - pad(b.u[m * stride_b], n)).norm();
        d.l2 += h * nrm * nrm;
        d.l32 += h * std::pow(nrm, 1.5);
    }
    d.l2 = std::sqrt(d.l2);
    d.l32 = std::pow(d.l32, 2.0 / 3.0);
    return d;
}

StudyTable sweep(const ProblemSpec& spec, const SolverParams& base, const std::string& kind,
                 const std::vector<double>& seq,
                 const std::function<SolverParams(SolverParams, double)>& tweak) {
    StudyTable table;
    table.kind = kind;
    std::vector<Trajectory> runs;
    for (double p : seq) {
        const SolverParams params = tweak(base, p);
        StudyRow row;
        row.param = p;
        row.manifest_hash = row_hash(spec, params, kind, p);
        Eigenbasis basis(spec.domain, params.n, params.oversample);
        SolveOutcome out = solve_retaining_partial(spec, params, basis);
        row.completed = out.completed;
        if (out.completed) {
            if (params.nu > 0.0) {
                double acc = 0.0;
                for (int m = 1; m <= out.trajectory.steps(); ++m) {
                    acc += out.trajectory.h * out.trajectory.u[m].squaredNorm();
                }
                row.extra = params.nu * acc;
            }
            if (!runs.empty()) {
                const RunDiff d = diff_runs(runs.back(), out.trajectory, 1, 1);
                row.diff_l2 = d.l2;
                row.diff_l32 = d.l32;
                const double prev = table.rows.back().diff_l2;
                if (prev > 0.0) row.ratio = d.l2 / prev;
            }
            runs.push_back(std::move(out.trajectory));
        } else {
            runs.push_back(Trajectory{});
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace

double trajectory_l2_distance(const Eigenbasis&, const Trajectory& a, const Trajectory& b) {
    return diff_runs(a, b, 1, 1).l2;
}

StudyTable eps_study(const ProblemSpec& spec, const SolverParams& params,
                     const std::vector<double>& eps_seq) {
    return sweep(spec, params, "eps", eps_seq, [](SolverParams p, double v) {
        p.eps = v;
        return p;
    });
}

StudyTable nu_study(const ProblemSpec& spec, const SolverParams& params,
                    const std::vector<double>& nu_seq) {
    return sweep(spec, params, "nu", nu_seq, [](SolverParams p, double v) {
        p.nu = v;
        return p;
    });
}

StudyTable n_study(const ProblemSpec& spec, const SolverParams& params,
                   const std::vector<int>& n_seq) {
    std::vector<double> seq(n_seq.begin(), n_seq.end());
    return sweep(spec, params, "n", seq, [](SolverParams p, double v) {
        p.n = static_cast<int>(v);
        return p;
    });
}

StudyTable h_study(const ProblemSpec& spec, const SolverParams& params,
                   const std::vector<int>& m_seq) {
    StudyTable table;
    table.kind = "h";
    Eigenbasis basis(spec.domain, params.n, params.oversample);
    std::vector<Trajectory> runs;
    std::vector<int> ms;
    for (int M : m_seq) {
        SolverParams p = params;
        p.M = M;
        StudyRow row;
        row.param = spec.T / M;
        row.manifest_hash = row_hash(spec, p, "h", row.param);
        SolveOutcome out = solve_retaining_partial(spec, p, basis);
        row.completed = out.completed;
        if (out.completed && !runs.empty() && runs.back().steps() > 0) {
            const int prev_m = ms.back();
            if (M % prev_m != 0) throw ParameterError("h_study: M sequence must be nested");
            const RunDiff d = diff_runs(runs.back(), out.trajectory, 1, M / prev_m);
            row.diff_l2 = d.l2;
            row.diff_l32 = d.l32;
            const double prev = table.rows.back().diff_l2;
            if (prev > 0.0) row.ratio = d.l2 / prev;
        }
        runs.push_back(std::move(out.trajectory));
        ms.push_back(M);
        table.rows.push_back(std::move(row));
    }
    return table;
}

MoscoTable mosco_desk_check(const ScalarGraph& gamma, const std::vector<double>& eps_seq,
                            const std::vector<std::vector<double>>& samples) {
    MoscoTable out;
    out.eps_seq = eps_seq;
    for (const auto& y : samples) {
        std::vector<double> row;
        for (double eps : eps_seq) {
            double acc = 0.0;
            for (double v : y) acc += moreau_potential(gamma, eps, v);
            row.push_back(acc / static_cast<double>(y.size()));
        }
        for (std::size_t i = 1; i < row.size(); ++i) {
            if (eps_seq[i] < eps_seq[i - 1] && row[i] < row[i - 1] - 1e-10) out.monotone = false;
        }
        double lim = 0.0;
        for (double v : y) lim += potential(gamma, v);
        out.psi_limit.push_back(lim / static_cast<double>(y.size()));
        out.psi.push_back(std::move(row));
    }
    return out;
}

UniquenessResult uniqueness_experiment(const ProblemSpec& spec, const SolverParams& params,
                                       const std::vector<double>& deltas) {
    Eigenbasis basis(spec.domain, params.n, params.oversample);
    const Constants cst = constants(spec, basis);
    if (!cst.tau_window) {
        throw ParameterError(
            "uniqueness_experiment: no contraction window (needs strongly monotone alpha and "
            "Lipschitz beta with declared constants)");
    }
    UniquenessResult res;
    res.tau = *cst.tau_window;
    res.deltas = deltas;

    const double Lx = spec.domain.Lx;
    auto e1 = [Lx](double x) { return std::sqrt(2.0 / Lx) * std::sin(M_PI * x / Lx); };

    for (double delta : deltas) {
        auto run = [&](double sign) {
            ProblemSpec s = spec;
            auto base = spec.u0;
            s.u0 = [base, e1, sign, delta](double x, double y) {
                return base(x, y) + sign * delta * e1(x);
            };
            return solve(s, params, basis);
        };
        const Trajectory tp = run(1.0);
        const Trajectory tm = run(-1.0);

        const int M = tp.steps();
        const double h = tp.h;
        const int windows = std::max(1, static_cast<int>(std::ceil(spec.T / res.tau)));
        std::vector<double> wn(windows, 0.0);
        double total = 0.0;
        for (int m = 1; m <= M; ++m) {
            const double d2 = (tp.u[m] - tm.u[m]).squaredNorm();
            const int k = std::min(windows - 1, static_cast<int>((m - 0.5) * h / res.tau));
            wn[k] += h * d2;
            total += h * d2;
        }
        for (double& v : wn) v = std::sqrt(v);
        res.window_norms.push_back(wn);
        res.total_norms.push_back(std::sqrt(total));
        double accum = 0.0;
        for (int k = 0; k < windows; ++k) {
            if (k > 0) res.growth_constants.push_back(accum > 0.0 ? wn[k] / accum : 0.0);
            accum = std::hypot(accum, wn[k]);
        }
    }

    for (std::size_t i = 1; i < res.total_norms.size(); ++i) {
        if (res.total_norms[i - 1] > 0.0) {
            res.halving_ratios.push_back(res.total_norms[i] / res.total_norms[i - 1]);
        }
    }
    // Least-squares slope of log(total) against log(delta).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i] > 0.0 && res.total_norms[i] > 0.0) {
            const double x = std::log(deltas[i]);
            const double y = std::log(res.total_norms[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++cnt;
        }
    }
    if (cnt >= 2) res.scaling_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return res;
}

}  // namespace fracdnl
