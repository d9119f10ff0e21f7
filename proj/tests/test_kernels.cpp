#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "fracdnl/errors.hpp"
#include "fracdnl/io.hpp"
#include "fracdnl/kernels.hpp"

using namespace fracdnl;

namespace {

std::vector<double> time_grid(double hi, int count) {
    std::vector<double> g;
    for (int i = 1; i <= count; ++i) g.push_back(hi * i / count);
    return g;
}

}  // namespace

TEST_CASE("riemann-liouville pair satisfies the sonine identity") {
    const auto grid = time_grid(2.0, 64);
    for (double theta : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        CHECK(verify_sonine(rl_pair(theta), grid) <= 1e-10);
    }
}

TEST_CASE("mismatched custom pair is detected") {
    auto pair = custom_power_pair({1.0, -0.5}, {1.0, -0.5}, 0.5);
    CHECK(verify_sonine(pair, time_grid(2.0, 16)) > 1e-3);
}

TEST_CASE("ell kernel integral") {
    const auto pair = rl_pair(0.5);
    CHECK(ell_l1(pair, 1.0) == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-14));
    CHECK(ell_l1(pair, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("l1 weights: formulas and telescoping") {
    const double theta = 0.3;
    const double h = 0.01;
    const auto w = l1_weights(theta, h, 32);
    CHECK(w.b0 == doctest::Approx(std::pow(h, -theta) / std::tgamma(2.0 - theta)).epsilon(1e-14));
    CHECK(w.a[0] == doctest::Approx(1.0));
    for (int k = 1; k < 32; ++k) {
        CHECK(w.a[k] ==
              doctest::Approx(std::pow(k + 1.0, 1.0 - theta) - std::pow(k, 1.0 - theta)));
        CHECK(w.a[k] < w.a[k - 1]);  // decreasing weights
    }
}

TEST_CASE("fractional derivative: constant and linear history") {
    const double theta = 0.5;
    const double h = 0.05;
    const int M = 40;
    const auto w = l1_weights(theta, h, M);

    std::vector<Eigen::VectorXd> constant(M + 1, Eigen::VectorXd::Constant(1, 3.0));
    CHECK(frac_derivative_apply(w, constant)[0] == doctest::Approx(0.0));

    // The scheme reproduces d^theta t / dt^theta = t^{1-theta}/Gamma(2-theta)
    // exactly on linear histories.
    std::vector<Eigen::VectorXd> linear;
    for (int j = 0; j <= M; ++j) linear.push_back(Eigen::VectorXd::Constant(1, j * h));
    const double t = M * h;
    CHECK(frac_derivative_apply(w, linear)[0] ==
          doctest::Approx(std::pow(t, 1.0 - theta) / std::tgamma(2.0 - theta)).epsilon(1e-12));
}

TEST_CASE("fast_history matches the naive sum") {
    std::mt19937 rng(42);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 50; ++trial) {
        const int M = 256;
        const auto w = l1_weights(0.4, 0.01, M);
        std::vector<Eigen::VectorXd> hist;
        for (int j = 0; j <= M; ++j) {
            Eigen::VectorXd v(4);
            for (int i = 0; i < 4; ++i) v[i] = dist(rng);
            hist.push_back(v);
        }
        const Eigen::VectorXd a = frac_derivative_apply(w, hist);
        const Eigen::VectorXd b = fast_history(w, hist);
        CHECK((a - b).norm() <= 1e-12 * (a.norm() + 1.0));
    }
}

TEST_CASE("ell_convolve: exact on constants and linears") {
    const auto pair = rl_pair(0.5);
    const double h = 0.02;
    const int M = 50;

    std::vector<double> ones(M + 1, 1.0);
    const auto c1 = ell_convolve(pair, h, ones);
    for (int m = 1; m <= M; ++m) {
        const double t = m * h;
        // ell * 1 = t^theta / Gamma(theta+1)
        CHECK(c1[m] == doctest::Approx(std::sqrt(t) / std::tgamma(1.5)).epsilon(1e-12));
    }

    std::vector<double> lin;
    for (int j = 0; j <= M; ++j) lin.push_back(j * h);
    const auto c2 = ell_convolve(pair, h, lin);
    for (int m = 1; m <= M; ++m) {
        const double t = m * h;
        // ell * s = t^{theta+1} / Gamma(theta+2)
        CHECK(c2[m] == doctest::Approx(std::pow(t, 1.5) / std::tgamma(2.5)).epsilon(1e-12));
    }
}

TEST_CASE("ell_convolve satisfies the young bound") {
    const auto pair = rl_pair(0.3);
    const double h = 0.01;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> f;
    double fmax = 0.0;
    for (int j = 0; j <= 100; ++j) {
        f.push_back(dist(rng));
        fmax = std::max(fmax, std::abs(f.back()));
    }
    const auto c = ell_convolve(pair, h, f);
    for (int m = 1; m <= 100; ++m) {
        CHECK(std::abs(c[m]) <= ell_l1(pair, m * h) * fmax + 1e-12);
    }
}

TEST_CASE("ell_convolve round trip with the discrete derivative") {
    // ell * D(z) recovers z_m - z_0 up to O(h^theta) on smooth histories.
    const double theta = 0.5;
    const int M = 200;
    const double h = 1.0 / M;
    const auto w = l1_weights(theta, h, M);
    const auto pair = rl_pair(theta);

    std::vector<double> z;
    for (int j = 0; j <= M; ++j) z.push_back(std::sin(2.0 * j * h));
    std::vector<double> d(M + 1, 0.0);
    for (int m = 1; m <= M; ++m) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) acc += w.a[m - j] * (z[j] - z[j - 1]);
        d[m] = w.b0 * acc;
    }
    const auto back = ell_convolve(pair, h, d);
    for (int m = M / 2; m <= M; ++m) {
        CHECK(std::abs(back[m] - (z[m] - z[0])) <= 5.0 * std::pow(h, theta));
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(rl_pair(0.0), ParameterError);
    CHECK_THROWS_AS(rl_pair(1.0), ParameterError);
    CHECK_THROWS_AS(l1_weights(0.5, 0.0, 4), ParameterError);
}

TEST_CASE("weights csv export") {
    const auto w = l1_weights(0.5, 0.1, 8);
    const std::string path = "/tmp/fracdnl_weights_test.csv";
    export_weights_csv(w, path);
    const std::string body = read_file(path);
    CHECK(body.find("k,a") != std::string::npos);
    CHECK(body.find("\n0,1") != std::string::npos);
    std::filesystem::remove(path);
}
