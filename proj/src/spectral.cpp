#include "fracdnl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracdnl/errors.hpp"

namespace fracdnl {

namespace {

struct Mode2d {
    int i;
    int j;
    double lambda;
};

}  // namespace

Eigenbasis::Eigenbasis(const Domain& dom, int n, int oversample) : dom_(dom), n_(n) {
    if (n < 1) throw ParameterError("Eigenbasis: need n >= 1");
    if (!(dom.Lx > 0.0) || (dom.kind == Domain::Kind::rectangle && !(dom.Ly > 0.0))) {
        throw ParameterError("Eigenbasis: side lengths must be positive");
    }
    if (oversample < 2) oversample = 2;

    if (dom.kind == Domain::Kind::interval) {
        const double L = dom.Lx;
        const int N = oversample * (n + 1);
        const int nodes = N - 1;
        lambdas_.resize(n);
        eig_.resize(nodes, n);
        qw_ = Eigen::VectorXd::Constant(nodes, L / N);
        qx_.resize(nodes);
        const double scale = std::sqrt(2.0 / L);
        for (int k = 0; k < nodes; ++k) qx_[k] = (k + 1) * L / N;
        for (int i = 0; i < n; ++i) {
            const double freq = (i + 1) * M_PI / L;
            lambdas_[i] = freq * freq;
            for (int k = 0; k < nodes; ++k) eig_(k, i) = scale * std::sin(freq * qx_[k]);
        }
        return;
    }

    // Rectangle: tensor sine modes sorted by eigenvalue.
    const int K = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + 2;
    std::vector<Mode2d> cand;
    for (int i = 1; i <= K; ++i) {
        for (int j = 1; j <= K; ++j) {
            const double lam = std::pow(i * M_PI / dom.Lx, 2) + std::pow(j * M_PI / dom.Ly, 2);
            cand.push_back({i, j, lam});
        }
    }
    std::sort(cand.begin(), cand.end(), [](const Mode2d& a, const Mode2d& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    cand.resize(n);
    int imax = 1;
    int jmax = 1;
    for (const Mode2d& m : cand) {
        imax = std::max(imax, m.i);
        jmax = std::max(jmax, m.j);
    }
    const int Nx = oversample * (imax + 1);
    const int Ny = oversample * (jmax + 1);
    const int nodes = (Nx - 1) * (Ny - 1);
    lambdas_.resize(n);
    eig_.resize(nodes, n);
    qw_ = Eigen::VectorXd::Constant(nodes, (dom.Lx / Nx) * (dom.Ly / Ny));
    qx_.resize(nodes);
    qy_.resize(nodes);
    const double scale = std::sqrt(4.0 / (dom.Lx * dom.Ly));
    for (int ky = 0, idx = 0; ky < Ny - 1; ++ky) {
        for (int kx = 0; kx < Nx - 1; ++kx, ++idx) {
            qx_[idx] = (kx + 1) * dom.Lx / Nx;
            qy_[idx] = (ky + 1) * dom.Ly / Ny;
        }
    }
    for (int m = 0; m < n; ++m) {
        lambdas_[m] = cand[m].lambda;
        const double fx = cand[m].i * M_PI / dom.Lx;
        const double fy = cand[m].j * M_PI / dom.Ly;
        for (int idx = 0; idx < nodes; ++idx) {
            eig_(idx, m) = scale * std::sin(fx * qx_[idx]) * std::sin(fy * qy_[idx]);
        }
    }
}

Eigen::VectorXd Eigenbasis::project(const Eigen::VectorXd& nodal) const {
    if (nodal.size() != eig_.rows()) throw ShapeError("project: nodal size mismatch");
    return eig_.transpose() * qw_.cwiseProduct(nodal);
}

Eigen::VectorXd Eigenbasis::synth(const Eigen::VectorXd& modal) const {
    if (modal.size() != n_) throw ShapeError("synth: modal size mismatch");
    return eig_ * modal;
}

Eigen::VectorXd Eigenbasis::sample(const std::function<double(double, double)>& f) const {
    Eigen::VectorXd out(eig_.rows());
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        out[k] = f(qx_[k], qy_.empty() ? 0.0 : qy_[k]);
    }
    return out;
}

Eigen::VectorXd Eigenbasis::apply_A(const Eigen::VectorXd& modal) const {
    if (modal.size() != n_) throw ShapeError("apply_A: modal size mismatch");
    return lambdas_.cwiseProduct(modal);
}

Eigen::VectorXd Eigenbasis::nodal_map(const Eigen::VectorXd& modal,
                                      const std::function<double(double)>& phi) const {
    Eigen::VectorXd nodal = synth(modal);
    for (Eigen::Index k = 0; k < nodal.size(); ++k) nodal[k] = phi(nodal[k]);
    return project(nodal);
}

Eigen::MatrixXd Eigenbasis::weighted_gram(const Eigen::VectorXd& nodal_weight) const {
    if (nodal_weight.size() != eig_.rows()) throw ShapeError("weighted_gram: size mismatch");
    return eig_.transpose() * qw_.cwiseProduct(nodal_weight).asDiagonal() * eig_;
}

double Eigenbasis::h_norm(const Eigen::VectorXd& nodal) const {
    return std::sqrt(qw_.dot(nodal.cwiseProduct(nodal)));
}

double Eigenbasis::v_norm_sq(const Eigen::VectorXd& modal) const {
    return lambdas_.cwiseProduct(modal).dot(modal);
}

double Eigenbasis::vstar_norm_sq(const Eigen::VectorXd& modal) const {
    return modal.cwiseQuotient(lambdas_).dot(modal);
}

double Eigenbasis::integrate(const Eigen::VectorXd& nodal) const { return qw_.dot(nodal); }

Eigen::VectorXd eta_solve(const Eigenbasis& basis, const Eigen::VectorXd& z, double nu,
                          double eps, const ScalarGraph& alpha, double tol, int budget,
                          const Eigen::VectorXd* initial_guess) {
    if (!(nu > 0.0) || !(eps > 0.0)) throw ParameterError("eta_solve: need nu, eps > 0");
    const int n = basis.modes();
    if (z.size() != n) throw ShapeError("eta_solve: modal size mismatch");

    const auto alpha_ne = [&](double r) { return nu * r + yosida(alpha, eps, r); };
    const auto residual = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
        Eigen::VectorXd nodal = basis.synth(u);
        for (Eigen::Index k = 0; k < nodal.size(); ++k) nodal[k] = alpha_ne(nodal[k]);
        return basis.project(nodal) - z;
    };

    Eigen::VectorXd u = initial_guess ? *initial_guess : Eigen::VectorXd::Zero(n);
    Eigen::VectorXd res = residual(u);
    std::vector<double> history{res.norm()};
    const double lip = nu + 1.0 / eps;
    const double tau = nu / (lip * lip);

    for (int it = 0; it < budget; ++it) {
        if (res.norm() <= tol) return u;
        // Semismooth derivative of alpha_nu_eps at the nodes.
        Eigen::VectorXd nodal = basis.synth(u);
        Eigen::VectorXd d(nodal.size());
        for (Eigen::Index k = 0; k < nodal.size(); ++k) {
            const double v = nodal[k];
            const double dv = 1e-6 * (1.0 + std::abs(v));
            double slope = (alpha_ne(v + dv) - alpha_ne(v - dv)) / (2.0 * dv);
            d[k] = std::clamp(slope, nu, lip);
        }
        Eigen::MatrixXd J = basis.weighted_gram(d);
        Eigen::VectorXd step = J.ldlt().solve(-res);
        if (!step.allFinite() || step.dot(res) >= 0.0) step = -tau * res;

        // The residual is the gradient of a strictly convex functional, so
        // psi(t) = step . residual(u + t step) is nondecreasing with
        // psi(0) < 0; the exact line search brackets its root. Accepting
        // t = 1 while psi(1) <= 0 keeps full Newton steps near the solution.
        Eigen::VectorXd trial = u + step;
        Eigen::VectorXd r2 = residual(trial);
        if (step.dot(r2) > 0.0) {
            double lo = 0.0, hi = 1.0;
            for (int b = 0; b < 40; ++b) {
                const double mid = 0.5 * (lo + hi);
                trial = u + mid * step;
                r2 = residual(trial);
                (step.dot(r2) > 0.0 ? hi : lo) = mid;
            }
        }
        u = trial;
        res = r2;
        history.push_back(res.norm());
    }
    if (res.norm() <= tol) return u;
    std::ostringstream msg;
    msg << "eta_solve: budget exhausted; residuals:";
    for (double r : history) msg << " " << r;
    throw NumericalFailure(msg.str(), z.norm(), eps, res.norm());
}

}  // namespace fracdnl
