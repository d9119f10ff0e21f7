#pragma once

#include <string>
#include <vector>

#include "fracdnl/solver.hpp"

namespace fracdnl {

// Per-step left-hand terms of the discrete energy inequality
//   psi(v_m) + (ell * 1/2 ||u||_V^2)_m + (ell * (w, u))_m <= psi(v0) + ||ell||_L1 * C_G
// with psi the integrated conjugate potential of alpha_nu_eps.
struct EnergyReport {
    std::vector<double> psi;      // integral of the conjugate at v_m
    std::vector<double> conv_v;   // (ell * 1/2 ||u||_V^2)_m
    std::vector<double> conv_w;   // (ell * (beta_eps(u), u))_m
    double bound = 0.0;           // psi(v0) + ||ell||_L1 * C_G
    double slack = 0.0;           // scheme-error allowance, O(h^theta)
    bool partial = false;         // conjugate evaluation failed somewhere
    bool ok = true;
    std::vector<std::string> violations;
};

EnergyReport energy_report(const ProblemSpec& spec, const SolverParams& params,
                           const Eigenbasis& basis, const Trajectory& traj);

// Minimum over m of the discrete chain-rule slack
//   [ell * (D_m(u), pi_n gamma(u))]_m - (psi_gamma(u_m) - psi_gamma(u_0)),
// nonnegative up to O(h^theta) scheme error.
double chain_rule_check(const ProblemSpec& spec, const Eigenbasis& basis, const Trajectory& traj,
                        const ScalarGraph& gamma);

struct LqBound {
    double norm = 0.0;               // discrete L^q(Q) norm of w = beta_eps(u)
    std::vector<double> trace;       // per-step integral of |w|^q
    double q = 0.0;
};

LqBound lq_bound(const ProblemSpec& spec, const SolverParams& params, const Eigenbasis& basis,
                 const Trajectory& traj);

// Discrete time-increment moduli: value(k) = h * sum_m ||z_{m+k} - z_m||_{V*}^2
// for each lag index k.
std::vector<double> increment_modulus(const Eigenbasis& basis, const Trajectory& traj,
                                      const std::vector<int>& lags);

}  // namespace fracdnl
