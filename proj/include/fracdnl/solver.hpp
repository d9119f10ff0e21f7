#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fracdnl/problem.hpp"

namespace fracdnl {

struct SolverParams {
    double eps = 1e-2;
    double nu = 1e-2;
    int n = 32;
    int M = 256;
    double tol = 1e-10;
    int budget = 100;
    enum class Kind { newton, relaxed } kind = Kind::newton;
    int oversample = 4;
};

struct StepStats {
    int iterations = 0;
    double residual = 0.0;
    bool contraction_ok = true;  // recorded stability-regime flag
};

// Time-indexed modal history of z = pi_n(alpha_nu_eps(u)) and u, with the
// nodal v, w recoverable on demand.
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> z;  // modal
    std::vector<Eigen::VectorXd> u;  // modal
    std::vector<StepStats> stats;
    SolverParams params;
    double h = 0.0;

    int steps() const { return static_cast<int>(times.size()) - 1; }
};

// Modal delta(t, z) = Lambda*eta(z) + pi_n beta_eps(eta(z)) - pi_n g(t, eta(z)).
Eigen::VectorXd assemble_delta(const Eigenbasis& basis, const ProblemSpec& spec,
                               const SolverParams& params, double t, const Eigen::VectorXd& z);

// Implicit L1 stepping of the regularized Galerkin system. Throws
// NumericalFailure (with the partial trajectory dropped by the caller) on a
// failed step; solve() retains the partial trajectory in the exception-free
// variant below.
Trajectory solve(const ProblemSpec& spec, const SolverParams& params, const Eigenbasis& basis);

struct SolveOutcome {
    Trajectory trajectory;  // complete or partial
    bool completed = true;
    std::string error;
};

SolveOutcome solve_retaining_partial(const ProblemSpec& spec, const SolverParams& params,
                                     const Eigenbasis& basis);

// A-posteriori re-evaluation of the discrete equation along a stored
// trajectory; returns the per-step max modal residual.
std::vector<double> residual(const ProblemSpec& spec, const SolverParams& params,
                             const Eigenbasis& basis, const Trajectory& traj);

// Nodal v_m = alpha_nu_eps(u_m) and w_m = beta_eps(u_m).
Eigen::VectorXd nodal_v(const ProblemSpec& spec, const SolverParams& params,
                        const Eigenbasis& basis, const Eigen::VectorXd& u_modal);
Eigen::VectorXd nodal_w(const ProblemSpec& spec, const SolverParams& params,
                        const Eigenbasis& basis, const Eigen::VectorXd& u_modal);

}  // namespace fracdnl
