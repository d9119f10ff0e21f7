#include "fracdnl/problem.hpp"

#include <cmath>
#include <sstream>

#include "fracdnl/errors.hpp"

namespace fracdnl {

namespace {

bool contains(const GraphInterval& iv, double y, double tol) {
    return y >= iv.lo - tol && y <= iv.hi + tol;
}

}  // namespace

double eta_scalar(const ScalarGraph& alpha, double eps, double nu, double v) {
    if (!(nu > 0.0) || !(eps > 0.0)) throw ParameterError("eta_scalar: need nu, eps > 0");
    if (v == 0.0) return 0.0;
    const auto f = [&](double u) { return nu * u + yosida(alpha, eps, u) - v; };
    double lo = 0.0;
    double hi = v / nu;
    if (v < 0.0) std::swap(lo, hi);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
        const double m = 0.5 * (lo + hi);
        if (f(m) < 0.0) {
            lo = m;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

double eta_conjugate(const ScalarGraph& alpha, double eps, double nu, double v) {
    const double u = eta_scalar(alpha, eps, nu, v);
    const double primal = 0.5 * nu * u * u + moreau_potential(alpha, eps, u);
    return std::max(0.0, u * v - primal);
}

std::vector<Violation> validate(const ProblemSpec& spec, const Eigenbasis& basis) {
    std::vector<Violation> out;
    const auto err = [&](const std::string& m) { out.push_back({true, m}); };
    const auto warn = [&](const std::string& m) { out.push_back({false, m}); };

    if (!(spec.T > 0.0)) err("horizon T must be positive");
    if (!(spec.g.q > 2.0)) err("growth exponent q must exceed 2");
    if (spec.g.lambda_g < 0.0) err("Lambda_g must be nonnegative");

    // (A1): Sonine identity and kernel monotonicity on a sample grid.
    {
        std::vector<double> grid(64);
        for (int k = 0; k < 64; ++k) grid[k] = spec.T * (k + 1) / 64.0;
        const double dev = verify_sonine(spec.pair, grid);
        if (dev > 1e-8) {
            err("Sonine identity violated: max deviation " + std::to_string(dev));
        }
        if (spec.pair.ell.coef < 0.0 || spec.pair.kappa.coef < 0.0 || spec.pair.ell.expo > 0.0 ||
            spec.pair.kappa.expo > 0.0) {
            err("kernels must be nonnegative and nonincreasing");
        }
    }

    // 0 in alpha(0), 0 in beta(0) after normalization.
    try {
        if (!contains(spec.alpha.values_at(0.0), 0.0, 1e-12)) err("0 not in alpha(0)");
        if (!contains(spec.beta.values_at(0.0), 0.0, 1e-12)) err("0 not in beta(0)");
    } catch (const DomainError& e) {
        err(std::string("graph domain excludes 0: ") + e.what());
    }

    // (A2) strict convexity of the alpha potential: flat stretches of the
    // minimal section break it (Hele-Shaw case); warn, do not reject.
    {
        bool flat = false;
        double prev_r = -4.0;
        double prev_v = minimal_section(spec.alpha, prev_r);
        for (int k = 1; k <= 200 && !flat; ++k) {
            const double r = -4.0 + 8.0 * k / 200.0;
            const double v = minimal_section(spec.alpha, r);
            if (v == prev_v && r != prev_r) flat = true;
            prev_r = r;
            prev_v = v;
        }
        if (flat) warn("alpha potential is not strictly convex on the sampled range");
    }

    // (A4): Lipschitz and growth bounds of g on a (u,t) sample.
    {
        const double lg = spec.g.lambda_g * (1.0 + 1e-6);
        bool lip_bad = false;
        bool growth_bad = false;
        const double x = 0.5 * spec.domain.Lx;
        const double y = spec.domain.kind == Domain::Kind::rectangle ? 0.5 * spec.domain.Ly : 0.0;
        for (int a = 0; a < 64 && !(lip_bad && growth_bad); ++a) {
            const double t = spec.T * (a + 0.5) / 64.0;
            double uprev = -8.0;
            double gprev = spec.g.g(x, y, t, uprev);
            for (int b = 1; b < 64; ++b) {
                const double u = -8.0 + 16.0 * b / 63.0;
                const double gu = spec.g.g(x, y, t, u);
                if (std::abs(gu - gprev) > lg * std::abs(u - uprev) + 1e-12) lip_bad = true;
                if (std::abs(gu) >
                    lg * (1.0 + std::pow(std::abs(u), 2.0 / spec.g.q)) + 1e-12) {
                    growth_bad = true;
                }
                uprev = u;
                gprev = gu;
            }
        }
        if (lip_bad) err("g violates the declared Lipschitz constant Lambda_g");
        if (growth_bad) err("g violates the declared growth bound Lambda_g(1+u^{2/q})");
    }

    // (A5): v0 in alpha(u0) nodewise; beta°(u0) and v0 in L^{2q-2}.
    {
        const Eigen::VectorXd u0 = basis.sample(spec.u0);
        const Eigen::VectorXd v0 = basis.sample(spec.v0);
        int bad = 0;
        double lq_beta = 0.0;
        double lq_v0 = 0.0;
        const double p = 2.0 * spec.g.q - 2.0;
        for (Eigen::Index k = 0; k < u0.size(); ++k) {
            try {
                if (!contains(spec.alpha.values_at(u0[k]), v0[k], 1e-8)) ++bad;
                lq_beta += basis.quad_weights()[k] *
                           std::pow(std::abs(minimal_section(spec.beta, u0[k])), p);
            } catch (const DomainError&) {
                ++bad;
            }
            lq_v0 += basis.quad_weights()[k] * std::pow(std::abs(v0[k]), p);
        }
        if (bad > 0) {
            err("v0 not in alpha(u0) at " + std::to_string(bad) + " quadrature nodes");
        }
        if (!std::isfinite(lq_beta) || !std::isfinite(lq_v0)) {
            err("beta°(u0) or v0 not finite in the discrete L^{2q-2} norm");
        }
    }
    return out;
}

InitialRegularization regularize_initial(const ProblemSpec& spec, const Eigenbasis& basis,
                                         double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("regularize_initial: eps in (0,1)");
    const Eigen::VectorXd u0 = basis.sample(spec.u0);
    const Eigen::VectorXd v0 = basis.sample(spec.v0);
    InitialRegularization out;
    out.u0e = u0;
    out.v0e.resize(u0.size());
    for (Eigen::Index k = 0; k < u0.size(); ++k) {
        for (const GraphJump& j : spec.alpha.jumps) {
            if (std::abs(u0[k] - j.s) <= 1e-12) {
                out.u0e[k] = j.s + eps * v0[k];
                break;
            }
        }
        if (!spec.alpha.in_domain(out.u0e[k])) {
            throw DomainError("regularize_initial: u0 node outside D(alpha)");
        }
        out.v0e[k] = yosida(spec.alpha, eps, out.u0e[k]);
    }
    return out;
}

RegularizedInit build_regularized(const ProblemSpec& spec, const Eigenbasis& basis, double eps,
                                  double nu) {
    const InitialRegularization init = regularize_initial(spec, basis, eps);
    RegularizedInit out;
    out.eps = eps;
    out.nu = nu;
    out.u0e = init.u0e;
    out.v0e = init.v0e;
    out.v0ne = nu * init.u0e + init.v0e;
    out.z0 = basis.project(out.v0ne);
    const double norm_u0e_sq = basis.quad_weights().dot(init.u0e.cwiseProduct(init.u0e));
    const double pairing = basis.quad_weights().dot(init.u0e.cwiseProduct(init.v0e));
    out.potential_bound = nu * norm_u0e_sq + std::abs(pairing);
    return out;
}

Constants constants(const ProblemSpec& spec, const Eigenbasis& basis) {
    Constants c;
    c.c_V = basis.c_V();
    const double lg = spec.g.lambda_g;
    const double q = spec.g.q;
    const double omega = spec.domain.measure();
    const double cv2 = c.c_V * c.c_V;
    c.C_G = lg == 0.0
                ? 0.0
                : cv2 * lg * lg * omega +
                      (q - 2.0) / (2.0 * q) * std::pow(lg, 2.0 * q / (q - 2.0)) *
                          std::pow(q / (2.0 * (2.0 + q) * cv2), -(q + 2.0) / (q - 2.0)) * omega;
    c.ell_l1_T = ell_l1(spec.pair, spec.T);

    if (!spec.alpha.strong_monotonicity || !spec.beta.lipschitz) {
        c.note = "uniqueness window omitted: alpha strong-monotonicity or beta Lipschitz "
                 "constant not declared";
        return c;
    }
    const double denom = std::sqrt(2.0) * (*spec.beta.lipschitz + lg);
    if (denom == 0.0) {
        c.note = "uniqueness window unbounded: Lambda_beta + Lambda_g = 0";
        return c;
    }
    const double bound = *spec.alpha.strong_monotonicity / denom;
    // int_0^tau ell = coef*tau^{e+1}/(e+1) = bound.
    const double e1 = spec.pair.ell.expo + 1.0;
    c.tau_window = std::pow(bound * e1 / spec.pair.ell.coef, 1.0 / e1);
    return c;
}

}  // namespace fracdnl
