#include "fracdnl/kernels.hpp"

#include <cmath>
#include <fstream>

#include "fracdnl/errors.hpp"
#include "fracdnl/io.hpp"

namespace fracdnl {

namespace {

double beta_fn(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Pairwise sum of a_{m-j}*(z_j - z_{j-1}) over j in [lo, hi].
Eigen::VectorXd pairwise_terms(const FracWeights& w, std::span<const Eigen::VectorXd> z,
                               std::size_t m, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 16) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(z[0].size());
        for (std::size_t j = lo; j <= hi; ++j) {
            acc += w.a[m - j] * (z[j] - z[j - 1]);
        }
        return acc;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_terms(w, z, m, lo, mid) + pairwise_terms(w, z, m, mid + 1, hi);
}

}  // namespace

double PowerKernel::at(double t) const { return coef * std::pow(t, expo); }

SoninePair rl_pair(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw ParameterError("rl_pair: theta must lie in (0,1)");
    }
    SoninePair p;
    p.theta = theta;
    p.ell = {1.0 / std::tgamma(theta), theta - 1.0};
    p.kappa = {1.0 / std::tgamma(1.0 - theta), -theta};
    p.kind = SoninePair::Kind::riemann_liouville;
    return p;
}

SoninePair custom_power_pair(PowerKernel ell, PowerKernel kappa, double theta_tag) {
    if (ell.expo <= -1.0 || kappa.expo <= -1.0 || ell.coef < 0.0 || kappa.coef < 0.0) {
        throw ParameterError("custom_power_pair: kernels must be nonnegative and integrable");
    }
    SoninePair p;
    p.theta = theta_tag;
    p.ell = ell;
    p.kappa = kappa;
    p.kind = SoninePair::Kind::custom;
    return p;
}

double verify_sonine(const SoninePair& pair, std::span<const double> grid) {
    // (c_l t^a) * (c_k t^b) = c_l c_k B(a+1, b+1) t^{a+b+1}, exactly.
    const double factor = pair.ell.coef * pair.kappa.coef *
                          beta_fn(pair.ell.expo + 1.0, pair.kappa.expo + 1.0);
    const double expo = pair.ell.expo + pair.kappa.expo + 1.0;
    double dev = 0.0;
    for (double t : grid) {
        dev = std::max(dev, std::abs(factor * std::pow(t, expo) - 1.0));
    }
    return dev;
}

double ell_l1(const SoninePair& pair, double t) {
    return pair.ell.coef * std::pow(t, pair.ell.expo + 1.0) / (pair.ell.expo + 1.0);
}

FracWeights l1_weights(double theta, double h, int count) {
    if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("l1_weights: theta must lie in (0,1)");
    if (!(h > 0.0) || count < 1) throw ParameterError("l1_weights: need h > 0, count >= 1");
    FracWeights w;
    w.theta = theta;
    w.h = h;
    w.count = count;
    w.b0 = std::pow(h, -theta) / std::tgamma(2.0 - theta);
    w.a.resize(count);
    for (int k = 0; k < count; ++k) {
        w.a[k] = std::pow(k + 1.0, 1.0 - theta) - std::pow(static_cast<double>(k), 1.0 - theta);
    }
    return w;
}

Eigen::VectorXd frac_derivative_apply(const FracWeights& w,
                                      std::span<const Eigen::VectorXd> history) {
    if (history.size() < 2) {
        if (history.empty()) throw ShapeError("frac_derivative_apply: empty history");
        return Eigen::VectorXd::Zero(history[0].size());
    }
    const std::size_t m = history.size() - 1;
    if (m > static_cast<std::size_t>(w.count)) {
        throw ShapeError("frac_derivative_apply: history longer than weight table");
    }
    const Eigen::Index dim = history[0].size();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (std::size_t j = 1; j <= m; ++j) {
        if (history[j].size() != dim) throw ShapeError("frac_derivative_apply: dimension mismatch");
        acc += w.a[m - j] * (history[j] - history[j - 1]);
    }
    return w.b0 * acc;
}

Eigen::VectorXd fast_history(const FracWeights& w, std::span<const Eigen::VectorXd> history) {
    if (history.size() < 2) {
        if (history.empty()) throw ShapeError("fast_history: empty history");
        return Eigen::VectorXd::Zero(history[0].size());
    }
    const std::size_t m = history.size() - 1;
    if (m > static_cast<std::size_t>(w.count)) {
        throw ShapeError("fast_history: history longer than weight table");
    }
    return w.b0 * pairwise_terms(w, history, m, 1, m);
}

std::vector<double> ell_convolve(const SoninePair& pair, double h, std::span<const double> f) {
    const double c = pair.ell.coef;
    const double e = pair.ell.expo;
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double u1 = (m - j - 1) * h;
            const double u2 = (m - j) * h;
            const double i0 = c * (std::pow(u2, e + 1.0) - std::pow(u1, e + 1.0)) / (e + 1.0);
            const double i1 = c * (std::pow(u2, e + 2.0) - std::pow(u1, e + 2.0)) / (e + 2.0);
            const double span_mj = (m - j) * h;  // t_m - t_j
            acc += f[j] * i0 + (f[j + 1] - f[j]) / h * (span_mj * i0 - i1);
        }
        out[m] = acc;
    }
    return out;
}

std::vector<Eigen::VectorXd> ell_convolve(const SoninePair& pair, double h,
                                          std::span<const Eigen::VectorXd> f) {
    const double c = pair.ell.coef;
    const double e = pair.ell.expo;
    const std::size_t n = f.size();
    std::vector<Eigen::VectorXd> out(n);
    if (n == 0) return out;
    const Eigen::Index dim = f[0].size();
    out[0] = Eigen::VectorXd::Zero(dim);
    for (std::size_t m = 1; m < n; ++m) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
        for (std::size_t j = 0; j < m; ++j) {
            const double u1 = (m - j - 1) * h;
            const double u2 = (m - j) * h;
            const double i0 = c * (std::pow(u2, e + 1.0) - std::pow(u1, e + 1.0)) / (e + 1.0);
            const double i1 = c * (std::pow(u2, e + 2.0) - std::pow(u1, e + 2.0)) / (e + 2.0);
            const double span_mj = (m - j) * h;
            acc += f[j] * i0 + (f[j + 1] - f[j]) * ((span_mj * i0 - i1) / h);
        }
        out[m] = acc;
    }
    return out;
}

void export_weights_csv(const FracWeights& w, const std::string& path) {
    std::string body = "k,a_k\n";
    for (int k = 0; k < w.count; ++k) {
        body += std::to_string(k) + "," + format_g17(w.a[k]) + "\n";
    }
    write_file_atomic(path, body);
}

}  // namespace fracdnl
