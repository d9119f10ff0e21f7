#include "fracdnl/solver.hpp"

#include <cmath>
#include <sstream>

#include "fracdnl/errors.hpp"
#include "fracdnl/io.hpp"

namespace fracdnl {

namespace {

// Nodal alpha_nu_eps = nu*id + alpha_eps.
Eigen::VectorXd alpha_ne_nodal(const ProblemSpec& spec, const SolverParams& p,
                               const Eigen::VectorXd& nodal) {
    Eigen::VectorXd out(nodal.size());
    for (Eigen::Index k = 0; k < nodal.size(); ++k) {
        out[k] = p.nu * nodal[k] + yosida(spec.alpha, p.eps, nodal[k]);
    }
    return out;
}

Eigen::VectorXd beta_eps_nodal(const ProblemSpec& spec, const SolverParams& p,
                               const Eigen::VectorXd& nodal) {
    Eigen::VectorXd out(nodal.size());
    for (Eigen::Index k = 0; k < nodal.size(); ++k) {
        out[k] = yosida_truncated(spec.beta, p.eps, nodal[k]);
    }
    return out;
}

Eigen::VectorXd g_nodal(const ProblemSpec& spec, const Eigenbasis& basis, double t,
                        const Eigen::VectorXd& nodal) {
    Eigen::VectorXd out(nodal.size());
    for (Eigen::Index k = 0; k < nodal.size(); ++k) {
        const double y = basis.node_y().empty() ? 0.0 : basis.node_y()[k];
        out[k] = spec.g.g(basis.node_x()[k], y, t, nodal[k]);
    }
    return out;
}

struct StepContext {
    const ProblemSpec& spec;
    const SolverParams& params;
    const Eigenbasis& basis;
    double b0;
    double t;
    Eigen::VectorXd rhs_lag;  // H_m - b0*z_{m-1}

    Eigen::VectorXd z_of(const Eigen::VectorXd& u_modal) const {
        return basis.project(alpha_ne_nodal(spec, params, basis.synth(u_modal)));
    }

    Eigen::VectorXd residual_at(const Eigen::VectorXd& u_modal) const {
        const Eigen::VectorXd nodal = basis.synth(u_modal);
        Eigen::VectorXd r = b0 * basis.project(alpha_ne_nodal(spec, params, nodal)) + rhs_lag;
        r += basis.apply_A(u_modal);
        r += basis.project(beta_eps_nodal(spec, params, nodal));
        r -= basis.project(g_nodal(spec, basis, t, nodal));
        return r;
    }

    // Semismooth nodal slopes of the full residual map.
    Eigen::VectorXd slopes(const Eigen::VectorXd& nodal) const {
        const double inv_eps = 1.0 / params.eps;
        Eigen::VectorXd d(nodal.size());
        for (Eigen::Index k = 0; k < nodal.size(); ++k) {
            const double v = nodal[k];
            const double dv = 1e-6 * (1.0 + std::abs(v));
            double da = (yosida(spec.alpha, params.eps, v + dv) -
                         yosida(spec.alpha, params.eps, v - dv)) /
                        (2.0 * dv);
            da = std::clamp(da, 0.0, inv_eps);
            double db = (yosida_truncated(spec.beta, params.eps, v + dv) -
                         yosida_truncated(spec.beta, params.eps, v - dv)) /
                        (2.0 * dv);
            db = std::clamp(db, 0.0, inv_eps);
            const double y = basis.node_y().empty() ? 0.0 : basis.node_y()[k];
            double dg = (spec.g.g(basis.node_x()[k], y, t, v + dv) -
                         spec.g.g(basis.node_x()[k], y, t, v - dv)) /
                        (2.0 * dv);
            dg = std::clamp(dg, -spec.g.lambda_g, spec.g.lambda_g);
            d[k] = b0 * (params.nu + da) + db - dg;
        }
        return d;
    }
};

// Relaxation factor from the monotonicity/Lipschitz constants.
double relaxation(const StepContext& ctx) {
    const double inv_eps = 1.0 / ctx.params.eps;
    const double lam_max = ctx.basis.lambdas()[ctx.basis.modes() - 1];
    const double strong = ctx.b0 * ctx.params.nu;
    const double lip =
        ctx.b0 * (ctx.params.nu + inv_eps) + lam_max + inv_eps + ctx.spec.g.lambda_g;
    return strong / (lip * lip);
}

// Modal diagonal dominating the residual Jacobian: the weighted Gram of any
// admissible nodal slope is bounded by its sup times the identity, so this
// preconditioned descent contracts mode by mode.
Eigen::VectorXd relaxed_diagonal(const StepContext& ctx) {
    const double inv_eps = 1.0 / ctx.params.eps;
    const double lip = ctx.b0 * (ctx.params.nu + inv_eps) + inv_eps + ctx.spec.g.lambda_g;
    return ctx.basis.lambdas().array() + lip;
}

StepStats solve_step(const StepContext& ctx, Eigen::VectorXd& u, int budget, double tol,
                     SolverParams::Kind kind) {
    StepStats stats;
    Eigen::VectorXd res = ctx.residual_at(u);
    std::vector<double> trace{res.norm()};
    const double tau = relaxation(ctx);
    stats.contraction_ok = tau > 0.0;
    // The residual is evaluated with roundoff proportional to its Lipschitz
    // scale; an absolute tolerance below that floor is unreachable.
    const double inv_eps = 1.0 / ctx.params.eps;
    const double lip = ctx.b0 * (ctx.params.nu + inv_eps) +
                       ctx.basis.lambdas()[ctx.basis.modes() - 1] + inv_eps +
                       ctx.spec.g.lambda_g;
    const double tol_eff =
        std::max(tol, 256.0 * std::numeric_limits<double>::epsilon() * lip);

    for (int it = 0; it < budget; ++it) {
        if (res.norm() <= tol_eff) {
            stats.iterations = it;
            stats.residual = res.norm();
            return stats;
        }
        if (kind == SolverParams::Kind::newton) {
            const Eigen::VectorXd nodal = ctx.basis.synth(u);
            Eigen::MatrixXd J = ctx.basis.weighted_gram(ctx.slopes(nodal));
            J.diagonal() += ctx.basis.lambdas();
            Eigen::VectorXd step = J.ldlt().solve(-res);
            if (!step.allFinite() || step.dot(res) >= 0.0) step = -tau * res;
            // Exact monotone line search: the residual map is (up to the
            // Lipschitz g term) a convex gradient, so step . residual is
            // nondecreasing along the ray and negative at 0.
            Eigen::VectorXd trial = u + step;
            Eigen::VectorXd r2 = ctx.residual_at(trial);
            if (step.dot(r2) > 0.0) {
                double lo = 0.0, hi = 1.0;
                for (int b = 0; b < 40; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    trial = u + mid * step;
                    r2 = ctx.residual_at(trial);
                    (step.dot(r2) > 0.0 ? hi : lo) = mid;
                }
            }
            u = trial;
            res = r2;
        } else {
            u -= res.cwiseQuotient(relaxed_diagonal(ctx));
            res = ctx.residual_at(u);
        }
        trace.push_back(res.norm());
    }
    if (res.norm() <= tol_eff) {
        stats.iterations = budget;
        stats.residual = res.norm();
        return stats;
    }
    std::ostringstream msg;
    msg << "step solve did not converge (remedy: smaller h or larger damping); residuals:";
    for (double r : trace) msg << " " << r;
    throw NumericalFailure(msg.str(), ctx.t, ctx.params.eps, res.norm());
}

}  // namespace

Eigen::VectorXd assemble_delta(const Eigenbasis& basis, const ProblemSpec& spec,
                               const SolverParams& params, double t, const Eigen::VectorXd& z) {
    const Eigen::VectorXd u = eta_solve(basis, z, params.nu, params.eps, spec.alpha, params.tol,
                                        params.budget);
    const Eigen::VectorXd nodal = basis.synth(u);
    Eigen::VectorXd delta = basis.apply_A(u);
    delta += basis.project(beta_eps_nodal(spec, params, nodal));
    delta -= basis.project(g_nodal(spec, basis, t, nodal));
    return delta;
}

Trajectory solve(const ProblemSpec& spec, const SolverParams& params, const Eigenbasis& basis) {
    SolveOutcome out = solve_retaining_partial(spec, params, basis);
    if (!out.completed) {
        throw NumericalFailure("solve aborted: " + out.error,
                               out.trajectory.times.empty() ? 0.0 : out.trajectory.times.back(),
                               params.eps, 0.0);
    }
    return out.trajectory;
}

SolveOutcome solve_retaining_partial(const ProblemSpec& spec, const SolverParams& params,
                                     const Eigenbasis& basis) {
    if (params.M < 1 || params.n < 1) throw ParameterError("solve: need n >= 1, M >= 1");
    const double h = spec.T / params.M;
    const FracWeights w = l1_weights(spec.pair.theta, h, params.M);
    const RegularizedInit init = build_regularized(spec, basis, params.eps, params.nu);

    SolveOutcome out;
    Trajectory& traj = out.trajectory;
    traj.params = params;
    traj.h = h;
    traj.times.push_back(0.0);
    traj.z.push_back(init.z0);
    // The initial projection is a standalone well-posed solve; keep it on a
    // sane budget even when the per-step budget is deliberately starved.
    traj.u.push_back(eta_solve(basis, init.z0, params.nu, params.eps, spec.alpha, params.tol,
                               std::max(params.budget, 200)));
    traj.stats.push_back({});

    for (int m = 1; m <= params.M; ++m) {
        const double t = m * h;
        // Lagged L1 history: b0 * sum_{j<m} a_{m-j} (z_j - z_{j-1}).
        Eigen::VectorXd lag = Eigen::VectorXd::Zero(params.n);
        for (int j = 1; j < m; ++j) {
            lag += w.a[m - j] * (traj.z[j] - traj.z[j - 1]);
        }
        StepContext ctx{spec, params, basis, w.b0, t, w.b0 * lag - w.b0 * traj.z[m - 1]};
        Eigen::VectorXd u = traj.u[m - 1];
        try {
            StepStats stats = solve_step(ctx, u, params.budget, params.tol, params.kind);
            traj.times.push_back(t);
            traj.u.push_back(u);
            traj.z.push_back(ctx.z_of(u));
            traj.stats.push_back(stats);
        } catch (const NumericalFailure& e) {
            out.completed = false;
            out.error = e.what();
            return out;
        }
    }
    return out;
}

std::vector<double> residual(const ProblemSpec& spec, const SolverParams& params,
                             const Eigenbasis& basis, const Trajectory& traj) {
    const double h = traj.h;
    const FracWeights w = l1_weights(spec.pair.theta, h, params.M);
    std::vector<double> out;
    for (int m = 1; m < static_cast<int>(traj.times.size()); ++m) {
        Eigen::VectorXd lag = Eigen::VectorXd::Zero(params.n);
        for (int j = 1; j < m; ++j) {
            lag += w.a[m - j] * (traj.z[j] - traj.z[j - 1]);
        }
        const Eigen::VectorXd nodal = basis.synth(traj.u[m]);
        Eigen::VectorXd r = w.b0 * (traj.z[m] - traj.z[m - 1]) + w.b0 * lag;
        r += basis.apply_A(traj.u[m]);
        r += basis.project(beta_eps_nodal(spec, params, nodal));
        r -= basis.project(g_nodal(spec, basis, traj.times[m], nodal));
        out.push_back(r.norm());
    }
    return out;
}

Eigen::VectorXd nodal_v(const ProblemSpec& spec, const SolverParams& params,
                        const Eigenbasis& basis, const Eigen::VectorXd& u_modal) {
    return alpha_ne_nodal(spec, params, basis.synth(u_modal));
}

Eigen::VectorXd nodal_w(const ProblemSpec& spec, const SolverParams& params,
                        const Eigenbasis& basis, const Eigen::VectorXd& u_modal) {
    return beta_eps_nodal(spec, params, basis.synth(u_modal));
}

}  // namespace fracdnl
