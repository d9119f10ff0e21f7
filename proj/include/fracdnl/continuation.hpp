#pragma once

#include <string>
#include <vector>

#include "fracdnl/solver.hpp"

namespace fracdnl {

// One row of a parameter-refinement Cauchy table: the run at `param`
// compared against the previous row's run in discrete L^2(Q) and
// L^{3/2}(0,T;H).
struct StudyRow {
    double param = 0.0;
    double diff_l2 = -1.0;    // -1 on the first row (no predecessor)
    double diff_l32 = -1.0;
    double ratio = -1.0;      // consecutive diff_l2 ratio
    double extra = 0.0;       // nu_study: nu*||u||^2_{L2(0,T;H)}
    bool completed = true;
    std::string manifest_hash;
};

struct StudyTable {
    std::string kind;
    std::vector<StudyRow> rows;
};

StudyTable eps_study(const ProblemSpec& spec, const SolverParams& params,
                     const std::vector<double>& eps_seq);

// Also records nu*||u||^2_{L2(0,T;H)} per row in `extra`.
StudyTable nu_study(const ProblemSpec& spec, const SolverParams& params,
                    const std::vector<double>& nu_seq);

StudyTable n_study(const ProblemSpec& spec, const SolverParams& params,
                   const std::vector<int>& n_seq);

// Time-step refinement: successive M-doublings compared on the shared
// coarse grid.
StudyTable h_study(const ProblemSpec& spec, const SolverParams& params,
                   const std::vector<int>& m_seq);

// Yosida-potential table Psi_{gamma_eps}(y) for nodal samples y:
// nondecreasing along decreasing eps, limit Psi_gamma(y).
struct MoscoTable {
    std::vector<double> eps_seq;
    std::vector<std::vector<double>> psi;  // psi[sample][eps index]
    std::vector<double> psi_limit;         // Psi_gamma(y) per sample
    bool monotone = true;
};

MoscoTable mosco_desk_check(const ScalarGraph& gamma, const std::vector<double>& eps_seq,
                            const std::vector<std::vector<double>>& samples);

// Perturbed-data contraction experiment on the theoretical window tau.
struct UniquenessResult {
    double tau = 0.0;
    std::vector<double> deltas;
    std::vector<std::vector<double>> window_norms;  // per delta, per window
    std::vector<double> total_norms;                // L^2(0,T) difference per delta
    std::vector<double> halving_ratios;             // consecutive total-norm ratios
    std::vector<double> growth_constants;           // window / previous accumulation
    double scaling_exponent = 0.0;
};

UniquenessResult uniqueness_experiment(const ProblemSpec& spec, const SolverParams& params,
                                       const std::vector<double>& deltas);

// Discrete L^2(Q) distance between two trajectories on the same grid.
double trajectory_l2_distance(const Eigenbasis& basis, const Trajectory& a, const Trajectory& b);

}  // namespace fracdnl
