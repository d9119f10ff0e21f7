#include "fracdnl/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "fracdnl/errors.hpp"

namespace fracdnl {

EnergyReport energy_report(const ProblemSpec& spec, const SolverParams& params,
                           const Eigenbasis& basis, const Trajectory& traj) {
    EnergyReport rep;
    const int M = traj.steps();
    const double h = traj.h;

    // Conjugate potential of alpha_nu_eps at the nodal v.
    rep.psi.reserve(M + 1);
    for (int m = 0; m <= M; ++m) {
        const Eigen::VectorXd v = nodal_v(spec, params, basis, traj.u[m]);
        Eigen::VectorXd c(v.size());
        bool bad = false;
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            try {
                c[k] = eta_conjugate(spec.alpha, params.eps, params.nu, v[k]);
            } catch (const NumericalFailure&) {
                bad = true;
                c[k] = 0.0;
            }
        }
        if (bad) rep.partial = true;
        rep.psi.push_back(basis.integrate(c));
    }

    std::vector<double> fv(M + 1), fw(M + 1);
    for (int m = 0; m <= M; ++m) {
        fv[m] = 0.5 * basis.v_norm_sq(traj.u[m]);
        const Eigen::VectorXd un = basis.synth(traj.u[m]);
        const Eigen::VectorXd wn = nodal_w(spec, params, basis, traj.u[m]);
        fw[m] = basis.integrate(un.cwiseProduct(wn));
    }
    rep.conv_v = ell_convolve(spec.pair, h, fv);
    rep.conv_w = ell_convolve(spec.pair, h, fw);

    const Constants cst = constants(spec, basis);
    rep.bound = rep.psi[0] + ell_l1(spec.pair, spec.T) * cst.C_G;

    // Scheme-error allowance: O(h^theta) times a data scale.
    double scale = std::abs(rep.psi[0]) + 1.0;
    for (int m = 1; m <= M; ++m) scale = std::max(scale, fv[m] + std::abs(fw[m]));
    rep.slack = 10.0 * std::pow(h, spec.pair.theta) * scale;

    for (int m = 1; m <= M; ++m) {
        auto flag = [&](double val, const char* what) {
            if (val < -1e-8) {
                std::ostringstream os;
                os << what << " negative at step " << m << ": " << val;
                rep.violations.push_back(os.str());
                rep.ok = false;
            }
        };
        flag(rep.psi[m], "psi");
        flag(rep.conv_v[m], "ell*||u||_V^2");
        flag(rep.conv_w[m], "ell*(w,u)");
        const double lhs = rep.psi[m] + rep.conv_v[m] + rep.conv_w[m];
        if (lhs > rep.bound + rep.slack) {
            std::ostringstream os;
            os << "energy bound exceeded at step " << m << ": " << lhs << " > " << rep.bound
               << " + " << rep.slack;
            rep.violations.push_back(os.str());
            rep.ok = false;
        }
    }
    return rep;
}

double chain_rule_check(const ProblemSpec& spec, const Eigenbasis& basis, const Trajectory& traj,
                        const ScalarGraph& gamma) {
    const int M = traj.steps();
    const double h = traj.h;
    const FracWeights w = l1_weights(spec.pair.theta, h, M);

    // psi_gamma(u_m) from the nodal potential.
    auto psi_of = [&](const Eigen::VectorXd& modal) {
        const Eigen::VectorXd nodal = basis.synth(modal);
        Eigen::VectorXd p(nodal.size());
        for (Eigen::Index k = 0; k < nodal.size(); ++k) p[k] = potential(gamma, nodal[k]);
        return basis.integrate(p);
    };
    const double psi0 = psi_of(traj.u[0]);

    // Pairing f_m = (D_m(u), pi_n gamma(u_m))_H; f_0 = 0.
    std::vector<double> f(M + 1, 0.0);
    for (int m = 1; m <= M; ++m) {
        Eigen::VectorXd D = Eigen::VectorXd::Zero(traj.u[0].size());
        for (int j = 1; j <= m; ++j) D += w.a[m - j] * (traj.u[j] - traj.u[j - 1]);
        D *= w.b0;
        const Eigen::VectorXd nodal = basis.synth(traj.u[m]);
        Eigen::VectorXd gn(nodal.size());
        for (Eigen::Index k = 0; k < nodal.size(); ++k) gn[k] = minimal_section(gamma, nodal[k]);
        f[m] = D.dot(basis.project(gn));
    }
    const std::vector<double> conv = ell_convolve(spec.pair, h, f);

    double min_slack = 0.0;
    for (int m = 1; m <= M; ++m) {
        const double slack = conv[m] - (psi_of(traj.u[m]) - psi0);
        if (m == 1 || slack < min_slack) min_slack = slack;
    }
    return min_slack;
}

LqBound lq_bound(const ProblemSpec& spec, const SolverParams& params, const Eigenbasis& basis,
                 const Trajectory& traj) {
    LqBound out;
    out.q = spec.g.q;
    const int M = traj.steps();
    double acc = 0.0;
    for (int m = 0; m <= M; ++m) {
        const Eigen::VectorXd wn = nodal_w(spec, params, basis, traj.u[m]);
        Eigen::VectorXd p(wn.size());
        for (Eigen::Index k = 0; k < wn.size(); ++k) p[k] = std::pow(std::abs(wn[k]), out.q);
        const double cell = basis.integrate(p);
        out.trace.push_back(cell);
        if (m >= 1) acc += traj.h * cell;
    }
    out.norm = std::pow(acc, 1.0 / out.q);
    return out;
}

std::vector<double> increment_modulus(const Eigenbasis& basis, const Trajectory& traj,
                                      const std::vector<int>& lags) {
    const int M = traj.steps();
    std::vector<double> out;
    for (int k : lags) {
        if (k < 0 || k > M) throw ParameterError("increment_modulus: lag out of range");
        double acc = 0.0;
        for (int m = 0; m + k <= M; ++m) {
            acc += traj.h * basis.vstar_norm_sq(traj.z[m + k] - traj.z[m]);
        }
        out.push_back(acc);
    }
    return out;
}

}  // namespace fracdnl
