#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace fracdnl {

// coef * t^expo on (0, T].
struct PowerKernel {
    double coef;
    double expo;
    double at(double t) const;
};

// Kernel pair (ell, kappa) with ell * kappa == 1. v1 admits power-form
// kernels only; the Riemann-Liouville pair is the canonical instance.
struct SoninePair {
    enum class Kind { riemann_liouville, custom };
    double theta;
    PowerKernel ell;
    PowerKernel kappa;
    Kind kind = Kind::riemann_liouville;
};

// kappa(t) = t^{-theta}/Gamma(1-theta), ell(t) = t^{theta-1}/Gamma(theta).
SoninePair rl_pair(double theta);

SoninePair custom_power_pair(PowerKernel ell, PowerKernel kappa, double theta_tag);

// max_t |(ell * kappa)(t) - 1| over the grid; the convolution of power
// kernels is evaluated exactly through the Beta function.
double verify_sonine(const SoninePair& pair, std::span<const double> grid);

// int_0^t ell, exact.
double ell_l1(const SoninePair& pair, double t);

// L1 product-integration weights for d/dt (kappa * (z - z0)) on a uniform
// grid: D_m(z) = b0 * sum_{j=1}^m a_{m-j} (z_j - z_{j-1}),
// a_k = (k+1)^{1-theta} - k^{1-theta}, b0 = h^{-theta}/Gamma(2-theta).
struct FracWeights {
    double theta;
    double h;
    int count;
    std::vector<double> a;
    double b0;
};

FracWeights l1_weights(double theta, double h, int count);

// D_m at the last history index; history holds z_0 ... z_m.
Eigen::VectorXd frac_derivative_apply(const FracWeights& w,
                                      std::span<const Eigen::VectorXd> history);

// Blocked pairwise evaluation of the same sum; agrees with the naive
// version to 1e-12 relative.
Eigen::VectorXd fast_history(const FracWeights& w, std::span<const Eigen::VectorXd> history);

// Discrete (ell * f)(t_m) for f sampled on the uniform grid t_0..t_M,
// product integration with exact cell moments of ell (piecewise-linear f).
std::vector<double> ell_convolve(const SoninePair& pair, double h, std::span<const double> f);
std::vector<Eigen::VectorXd> ell_convolve(const SoninePair& pair, double h,
                                          std::span<const Eigen::VectorXd> f);

// Weights CSV (k, a_k) for cross-checking.
void export_weights_csv(const FracWeights& w, const std::string& path);

}  // namespace fracdnl
