#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracdnl/config.hpp"
#include "fracdnl/errors.hpp"
#include "fracdnl/solver.hpp"

using namespace fracdnl;

namespace {

ProblemSpec zero_problem() {
    ProblemSpec spec = preset_problem("linear_heat");
    spec.u0 = [](double, double) { return 0.0; };
    spec.v0 = [](double, double) { return 0.0; };
    return spec;
}

SolverParams small_params() {
    SolverParams p;
    p.n = 8;
    p.M = 16;
    return p;
}

}  // namespace

TEST_CASE("zero data yields the zero trajectory") {
    const ProblemSpec spec = zero_problem();
    const SolverParams p = small_params();
    Eigenbasis basis(spec.domain, p.n, p.oversample);
    const Trajectory traj = solve(spec, p, basis);
    CHECK(traj.steps() == p.M);
    for (const auto& u : traj.u) CHECK(u.norm() <= 1e-10);
    for (const auto& z : traj.z) CHECK(z.norm() <= 1e-10);
}

TEST_CASE("assemble_delta: diagonal closed forms") {
    const ProblemSpec spec = zero_problem();
    SolverParams p = small_params();
    p.eps = 0.1;
    p.nu = 0.05;
    Eigenbasis basis(spec.domain, p.n, p.oversample);

    CHECK(assemble_delta(basis, spec, p, 0.3, Eigen::VectorXd::Zero(p.n)).norm() <= 1e-10);

    // alpha = id, beta = 0, g = 0: delta_i = lambda_i z_i / (nu + 1/(1+eps))
    Eigen::VectorXd z(p.n);
    for (int i = 0; i < p.n; ++i) z[i] = 1.0 / (i + 1.0);
    const Eigen::VectorXd d = assemble_delta(basis, spec, p, 0.0, z);
    const double slope = p.nu + 1.0 / (1.0 + p.eps);
    for (int i = 0; i < p.n; ++i) {
        CHECK(d[i] == doctest::Approx(basis.lambdas()[i] * z[i] / slope).epsilon(1e-8));
    }
}

TEST_CASE("assemble_delta: beta = identity adds the modal u term") {
    ProblemSpec spec = zero_problem();
    spec.beta = make_identity();
    SolverParams p = small_params();
    p.eps = 0.1;
    p.nu = 0.05;
    Eigenbasis basis(spec.domain, p.n, p.oversample);
    Eigen::VectorXd z = Eigen::VectorXd::Constant(p.n, 0.2);
    const Eigen::VectorXd d = assemble_delta(basis, spec, p, 0.0, z);
    const double slope = p.nu + 1.0 / (1.0 + p.eps);
    for (int i = 0; i < p.n; ++i) {
        const double u_i = z[i] / slope;
        // beta_eps of identity has slope 1/(1+eps) below the clamp
        const double expected = basis.lambdas()[i] * u_i + u_i / (1.0 + p.eps);
        CHECK(d[i] == doctest::Approx(expected).epsilon(1e-7));
    }
}

TEST_CASE("trajectory invariant: z_m is the projected alpha of u_m") {
    const ProblemSpec spec = preset_problem("stefan");
    SolverParams p = small_params();
    p.M = 8;
    Eigenbasis basis(spec.domain, p.n, p.oversample);
    const Trajectory traj = solve(spec, p, basis);
    for (int m = 0; m <= traj.steps(); ++m) {
        const Eigen::VectorXd v = nodal_v(spec, p, basis, traj.u[m]);
        CHECK((basis.project(v) - traj.z[m]).norm() <= 10.0 * p.tol);
    }
}

TEST_CASE("residual: fresh trajectory small, perturbation spikes") {
    const ProblemSpec spec = preset_problem("stefan");
    SolverParams p = small_params();
    Eigenbasis basis(spec.domain, p.n, p.oversample);
    Trajectory traj = solve(spec, p, basis);

    const auto fresh = residual(spec, p, basis, traj);
    for (double r : fresh) CHECK(r <= 10.0 * p.tol);

    const FracWeights w = l1_weights(spec.pair.theta, traj.h, p.M);
    traj.z[5][0] += 1e-3;
    const auto bumped = residual(spec, p, basis, traj);
    CHECK(bumped[4] >= w.b0 * 1e-3 / 2.0);  // step m=5 lives at index 4
}

TEST_CASE("newton and relaxed solves agree (step uniqueness)") {
    const ProblemSpec spec = preset_problem("stefan");
    SolverParams p = small_params();
    p.M = 6;
    p.budget = 4000;  // the relaxed iteration contracts slowly
    Eigenbasis basis(spec.domain, p.n, p.oversample);
    const Trajectory a = solve(spec, p, basis);
    SolverParams p2 = p;
    p2.kind = SolverParams::Kind::relaxed;
    const Trajectory b = solve(spec, p2, basis);
    for (int m = 0; m <= a.steps(); ++m) {
        CHECK((a.u[m] - b.u[m]).norm() <= 1e-6);
    }
}

TEST_CASE("sign structure and truncation bound along a run") {
    ProblemSpec spec = preset_problem("lipschitz_demo");
    SolverParams p = small_params();
    Eigenbasis basis(spec.domain, p.n, p.oversample);
    const Trajectory traj = solve(spec, p, basis);
    for (int m = 0; m <= traj.steps(); ++m) {
        const Eigen::VectorXd v = nodal_v(spec, p, basis, traj.u[m]);
        const Eigen::VectorXd w = nodal_w(spec, p, basis, traj.u[m]);
        CHECK(basis.quad_weights().dot(w.cwiseProduct(v)) >= -1e-8);
        CHECK(w.cwiseAbs().maxCoeff() <= 1.0 / p.eps + 1e-12);
    }
}

TEST_CASE("manufactured forcing reproduces the target") {
    // u*(x,t) = sin(pi x)(1+t); the forcing is the discrete operator
    // applied to u*, so the solver must return u* to solver precision.
    ProblemSpec spec = preset_problem("linear_heat");
    SolverParams p;
    p.n = 8;
    p.M = 12;
    Eigenbasis basis(spec.domain, p.n, p.oversample);

    const double T = spec.T;
    const double h = T / p.M;
    const FracWeights w = l1_weights(spec.pair.theta, h, p.M);
    const double slope = p.nu + 1.0 / (1.0 + p.eps);

    // modal target: only mode 1, coefficient (1+t)/sqrt(2)
    const double c0 = 1.0 / std::sqrt(2.0);
    auto target = [&](int m) { return c0 * (1.0 + m * h); };

    // modal forcing f_m = D_m(slope * u*) + lambda_1 u*_m (beta = 0)
    std::vector<double> f(p.M + 1, 0.0);
    for (int m = 1; m <= p.M; ++m) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) acc += w.a[m - j] * slope * (target(j) - target(j - 1));
        f[m] = w.b0 * acc + basis.lambdas()[0] * target(m);
    }
    // g(x, t, u) = f(t) * e1(x), independent of u
    spec.g.g = [f, h, p](double x, double, double t, double) {
        int m = static_cast<int>(std::lround(t / h));
        m = std::clamp(m, 0, p.M);
        return f[m] * std::sqrt(2.0) * std::sin(M_PI * x);
    };
    spec.g.lambda_g = 0.0;
    spec.u0 = [](double x, double) { return std::sin(M_PI * x); };
    spec.v0 = [slope](double x, double) { return slope * std::sin(M_PI * x); };
    // initial z must match the scheme's regularized alpha of u*(0)
    const Trajectory traj = solve(spec, p, basis);
    for (int m = 1; m <= p.M; ++m) {
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(p.n);
        expected[0] = target(m);
        CHECK((traj.u[m] - expected).norm() <= 10.0 * p.tol);
    }
}

TEST_CASE("repeat determinism") {
    const ProblemSpec spec = preset_problem("porous_medium");
    SolverParams p = small_params();
    Eigenbasis basis(spec.domain, p.n, p.oversample);
    const Trajectory a = solve(spec, p, basis);
    const Trajectory b = solve(spec, p, basis);
    for (int m = 0; m <= a.steps(); ++m) {
        CHECK((a.u[m] - b.u[m]).norm() == 0.0);
        CHECK((a.z[m] - b.z[m]).norm() == 0.0);
    }
}

TEST_CASE("failure retains the partial trajectory") {
    ProblemSpec spec = preset_problem("stefan");
    SolverParams p = small_params();
    p.budget = 1;  // starve the nonlinear solve
    p.tol = 1e-14;
    Eigenbasis basis(spec.domain, p.n, p.oversample);
    const SolveOutcome out = solve_retaining_partial(spec, p, basis);
    if (!out.completed) {
        CHECK(out.trajectory.times.size() >= 1);
        CHECK(!out.error.empty());
        CHECK_THROWS_AS(solve(spec, p, basis), NumericalFailure);
    }
}
