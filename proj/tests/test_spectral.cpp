#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracdnl/errors.hpp"
#include "fracdnl/spectral.hpp"

using namespace fracdnl;

TEST_CASE("interval eigenvalues and orthonormality") {
    Domain dom;
    Eigenbasis basis(dom, 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(basis.lambdas()[i] == doctest::Approx(std::pow((i + 1) * M_PI, 2)).epsilon(1e-13));
    }
    // project . synth is the identity on modal space (discrete orthonormality)
    std::mt19937 rng(3);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd u(8);
        for (int i = 0; i < 8; ++i) u[i] = dist(rng);
        const Eigen::VectorXd back = basis.project(basis.synth(u));
        CHECK((back - u).norm() <= 1e-12 * u.norm());
        // Parseval: nodal H-norm equals the modal norm
        CHECK(basis.h_norm(basis.synth(u)) == doctest::Approx(u.norm()).epsilon(1e-12));
    }
}

TEST_CASE("sampling a retained sine recovers a unit coefficient") {
    Domain dom;
    dom.Lx = 2.0;
    Eigenbasis basis(dom, 6);
    const Eigen::VectorXd f =
        basis.sample([](double x, double) { return std::sqrt(1.0) * std::sin(3.0 * M_PI * x / 2.0); });
    const Eigen::VectorXd u = basis.project(f);
    for (int i = 0; i < 6; ++i) {
        const double expected = (i == 2) ? 1.0 / std::sqrt(2.0 / 2.0) : 0.0;
        CHECK(u[i] == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("apply_A and the V norms") {
    Domain dom;
    Eigenbasis basis(dom, 4);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
    u[1] = 2.0;
    const Eigen::VectorXd Au = basis.apply_A(u);
    CHECK(Au[1] == doctest::Approx(2.0 * 4.0 * M_PI * M_PI));
    CHECK(basis.v_norm_sq(u) == doctest::Approx(4.0 * 4.0 * M_PI * M_PI));
    CHECK(basis.vstar_norm_sq(u) == doctest::Approx(4.0 / (4.0 * M_PI * M_PI)));
    CHECK(basis.c_V() == doctest::Approx(1.0 / M_PI));
}

TEST_CASE("rectangle tensor modes are sorted and orthonormal") {
    Domain dom;
    dom.kind = Domain::Kind::rectangle;
    dom.Lx = 1.0;
    dom.Ly = 2.0;
    Eigenbasis basis(dom, 5);
    for (int i = 1; i < 5; ++i) CHECK(basis.lambdas()[i] >= basis.lambdas()[i - 1]);
    CHECK(basis.lambdas()[0] ==
          doctest::Approx(M_PI * M_PI + M_PI * M_PI / 4.0).epsilon(1e-12));
    Eigen::VectorXd u(5);
    u << 1, -2, 0.5, 0, 3;
    CHECK((basis.project(basis.synth(u)) - u).norm() <= 1e-11);
}

TEST_CASE("integrate: exact on retained sine products, first order on constants") {
    Domain dom;
    dom.Lx = 3.0;
    Eigenbasis basis(dom, 4);
    // e1^2 integrates to exactly 1 under the discrete rule
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4);
    e1[0] = 1.0;
    const Eigen::VectorXd nodal = basis.synth(e1);
    CHECK(basis.integrate(nodal.cwiseProduct(nodal)) == doctest::Approx(1.0).epsilon(1e-12));
    // constants (nonzero boundary) only to O(L/N)
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(basis.node_count());
    CHECK(basis.integrate(ones) == doctest::Approx(3.0).epsilon(2.0 / basis.node_count()));
}

TEST_CASE("eta_solve: identity graph closed form") {
    Domain dom;
    Eigenbasis basis(dom, 6);
    const auto alpha = make_identity();
    const double nu = 0.05;
    const double eps = 0.1;
    Eigen::VectorXd z(6);
    z << 1, -0.5, 0.25, 0, 2, -1;
    const Eigen::VectorXd u = eta_solve(basis, z, nu, eps, alpha);
    const double slope = nu + 1.0 / (1.0 + eps);
    CHECK((u - z / slope).norm() <= 1e-10);
}

TEST_CASE("eta_solve: uniqueness from random initial guesses") {
    Domain dom;
    Eigenbasis basis(dom, 5);
    const auto alpha = make_stefan();
    Eigen::VectorXd z(5);
    z << 0.3, -0.2, 0.1, 0.05, -0.4;
    const Eigen::VectorXd ref = eta_solve(basis, z, 1e-2, 1e-2, alpha);
    std::mt19937 rng(11);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd guess(5);
        for (int i = 0; i < 5; ++i) guess[i] = dist(rng);
        const Eigen::VectorXd u = eta_solve(basis, z, 1e-2, 1e-2, alpha, 1e-12, 200, &guess);
        CHECK((u - ref).norm() <= 1e-8);
    }
}

TEST_CASE("eta_solve residual contract") {
    Domain dom;
    Eigenbasis basis(dom, 8);
    const auto alpha = make_heaviside();
    Eigen::VectorXd z(8);
    z << 0.7, 0.1, -0.3, 0.2, 0.0, 0.05, -0.01, 0.4;
    const double nu = 1e-2;
    const double eps = 1e-2;
    const Eigen::VectorXd u = eta_solve(basis, z, nu, eps, alpha);
    Eigen::VectorXd nodal = basis.synth(u);
    Eigen::VectorXd a(nodal.size());
    for (Eigen::Index k = 0; k < nodal.size(); ++k) {
        a[k] = nu * nodal[k] + yosida(alpha, eps, nodal[k]);
    }
    CHECK((basis.project(a) - z).norm() <= 1e-10);
}

TEST_CASE("bad construction throws") {
    Domain dom;
    CHECK_THROWS_AS(Eigenbasis(dom, 0), ParameterError);
}
