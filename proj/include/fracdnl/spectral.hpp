#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fracdnl/graphs.hpp"

namespace fracdnl {

// Interval (0, Lx) or rectangle (0, Lx) x (0, Ly).
struct Domain {
    enum class Kind { interval, rectangle };
    Kind kind = Kind::interval;
    double Lx = 1.0;
    double Ly = 1.0;

    double measure() const { return kind == Kind::interval ? Lx : Lx * Ly; }
};

// Dirichlet-Laplacian sine eigenbasis, H-orthonormal on the quadrature
// grid. Quadrature is the uniform interior-node rule, which is exact for
// products of the retained sines.
class Eigenbasis {
  public:
    Eigenbasis(const Domain& dom, int n, int oversample = 4);

    const Domain& domain() const { return dom_; }
    int modes() const { return n_; }
    const Eigen::VectorXd& lambdas() const { return lambdas_; }
    double c_V() const { return 1.0 / std::sqrt(lambdas_[0]); }

    Eigen::Index node_count() const { return eig_.rows(); }
    const Eigen::VectorXd& quad_weights() const { return qw_; }
    const std::vector<double>& node_x() const { return qx_; }
    const std::vector<double>& node_y() const { return qy_; }  // empty in 1D

    // pi_n f from nodal samples; H-orthogonal projection.
    Eigen::VectorXd project(const Eigen::VectorXd& nodal) const;
    // Nodal values of a modal vector.
    Eigen::VectorXd synth(const Eigen::VectorXd& modal) const;

    // Sample a closed-form field on the quadrature nodes.
    Eigen::VectorXd sample(const std::function<double(double, double)>& f) const;

    // Modal A*u with entries lambda_i u_i.
    Eigen::VectorXd apply_A(const Eigen::VectorXd& modal) const;

    // pi_n(phi(u)): pointwise evaluation on the oversampled nodes, then
    // projection.
    Eigen::VectorXd nodal_map(const Eigen::VectorXd& modal,
                              const std::function<double(double)>& phi) const;

    // E^T diag(qw .* nodal_weight) E; Jacobian building block for the
    // nonlinear solves.
    Eigen::MatrixXd weighted_gram(const Eigen::VectorXd& nodal_weight) const;

    double h_norm(const Eigen::VectorXd& nodal) const;  // discrete L2(Omega)
    double v_norm_sq(const Eigen::VectorXd& modal) const;   // sum lambda_i u_i^2
    double vstar_norm_sq(const Eigen::VectorXd& modal) const;
    double integrate(const Eigen::VectorXd& nodal) const;

  private:
    Domain dom_;
    int n_;
    Eigen::VectorXd lambdas_;
    Eigen::MatrixXd eig_;  // nodes x modes
    Eigen::VectorXd qw_;
    std::vector<double> qx_;
    std::vector<double> qy_;
};

// Solve pi_n(alpha_nu_eps(u)) = z for modal u; unique by nu-strong
// monotonicity. Damped Newton with a relaxed fixed-point fallback.
Eigen::VectorXd eta_solve(const Eigenbasis& basis, const Eigen::VectorXd& z, double nu,
                          double eps, const ScalarGraph& alpha, double tol = 1e-12,
                          int budget = 200,
                          const Eigen::VectorXd* initial_guess = nullptr);

}  // namespace fracdnl
