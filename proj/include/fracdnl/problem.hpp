#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracdnl/graphs.hpp"
#include "fracdnl/kernels.hpp"
#include "fracdnl/spectral.hpp"

namespace fracdnl {

// Lipschitz perturbation g(x, t, u) with declared constants.
struct Perturbation {
    std::function<double(double x, double y, double t, double u)> g;
    double lambda_g = 0.0;
    double q = 3.0;  // growth exponent, > 2
};

struct ProblemSpec {
    std::string name;
    Domain domain;
    double T = 1.0;
    SoninePair pair;
    ScalarGraph alpha;
    ScalarGraph beta;
    Perturbation g;
    std::function<double(double, double)> u0;
    std::function<double(double, double)> v0;
};

struct Violation {
    bool error;  // false = warning
    std::string what;
};

// Sampled checks of the standing assumptions; returns violations and
// warnings, never throws.
std::vector<Violation> validate(const ProblemSpec& spec, const Eigenbasis& basis);

// Nodal regularized initial data per the jump-splitting construction:
// u0e = u0 + eps*v0 on nodes where u0 hits a jump of alpha, u0e = u0
// elsewhere; v0e = yosida(alpha, eps, u0e).
struct InitialRegularization {
    Eigen::VectorXd u0e;
    Eigen::VectorXd v0e;
};

InitialRegularization regularize_initial(const ProblemSpec& spec, const Eigenbasis& basis,
                                         double eps);

struct RegularizedInit {
    double eps;
    double nu;
    Eigen::VectorXd u0e;    // nodal
    Eigen::VectorXd v0e;    // nodal
    Eigen::VectorXd v0ne;   // nodal, nu*u0e + v0e
    Eigen::VectorXd z0;     // modal projection of v0ne
    double potential_bound;  // nu*||u0e||^2 + |(u0e, v0e)|
};

RegularizedInit build_regularized(const ProblemSpec& spec, const Eigenbasis& basis, double eps,
                                  double nu);

struct Constants {
    double c_V;
    double C_G;
    std::optional<double> tau_window;
    double ell_l1_T;
    std::string note;
};

// c_V = lambda_1^{-1/2}; C_G from the Lipschitz/growth constants; the
// uniqueness window tau when alpha declares strong monotonicity and beta a
// Lipschitz constant.
Constants constants(const ProblemSpec& spec, const Eigenbasis& basis);

// Scalar conjugate of alpha_nu_eps = nu*id + alpha_eps at v: solves
// alpha_nu_eps(u) = v and applies the Fenchel identity.
double eta_conjugate(const ScalarGraph& alpha, double eps, double nu, double v);

// Scalar inverse of alpha_nu_eps (strictly increasing, nu-coercive).
double eta_scalar(const ScalarGraph& alpha, double eps, double nu, double v);

}  // namespace fracdnl
