#include "fracdnl/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracdnl/errors.hpp"

namespace fracdnl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kJumpTol = 1e-12;

// Adaptive Simpson on [a, b], tolerance 1e-10, splitting at the listed
// interior points (graph jumps make the integrand discontinuous).
double simpson_step(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double fm, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, flm, tol / 2.0, depth - 1) +
           simpson_step(f, m, fm, b, fb, frm, tol / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& splits, double tol) {
    if (a == b) return 0.0;
    std::vector<double> pts{a, b};
    for (double s : splits) {
        if (s > std::min(a, b) && s < std::max(a, b)) pts.push_back(s);
    }
    std::sort(pts.begin(), pts.end());
    if (a > b) std::reverse(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double x0 = pts[k];
        const double x1 = pts[k + 1];
        const double xm = 0.5 * (x0 + x1);
        total += simpson_step(f, x0, f(x0), x1, f(x1), f(xm), tol, 48);
    }
    return total;
}

double midpoint_selection(const ScalarGraph& g, double r) {
    const GraphInterval iv = g.values_at(r);
    return 0.5 * (iv.lo + iv.hi);
}

}  // namespace

GraphInterval ScalarGraph::values_at(double r) const {
    if (!in_domain(r)) throw DomainError(name + ": argument outside D(gamma): " + std::to_string(r));
    for (const GraphJump& j : jumps) {
        if (std::abs(r - j.s) <= kJumpTol) return {j.lo, j.hi};
    }
    for (const GraphBranch& b : branches) {
        if (r >= b.lo && r <= b.hi) {
            const double v = b.value(r);
            return {v, v};
        }
    }
    throw DomainError(name + ": argument outside D(gamma): " + std::to_string(r));
}

double minimal_section(const ScalarGraph& g, double r) {
    const GraphInterval iv = g.values_at(r);
    if (iv.lo > 0.0) return iv.lo;
    if (iv.hi < 0.0) return iv.hi;
    return 0.0;
}

double resolvent(const ScalarGraph& g, double eps, double r) {
    if (!(eps > 0.0)) throw ParameterError("resolvent: eps must be positive");
    if (g.resolvent_cf) return g.resolvent_cf(eps, r);

    // Jump images: r in s_j + eps*[lo, hi] pins the resolvent at s_j.
    for (const GraphJump& j : g.jumps) {
        if (r >= j.s + eps * j.lo && r <= j.s + eps * j.hi) return j.s;
    }
    // Bounded domains act as vertical rays at the endpoints.
    if (std::isfinite(g.dom_lo) && r <= g.dom_lo + eps * g.values_at(g.dom_lo).lo) return g.dom_lo;
    if (std::isfinite(g.dom_hi) && r >= g.dom_hi + eps * g.values_at(g.dom_hi).hi) return g.dom_hi;

    const auto f = [&](double x) { return x + eps * midpoint_selection(g, x) - r; };

    // Bracket expansion around the clamped argument.
    double a = std::clamp(r, g.dom_lo, g.dom_hi);
    double b = a;
    double fa = f(a);
    double fb = fa;
    double step = 1.0 + std::abs(r);
    int budget = 200;
    while (fa > 0.0 && budget-- > 0) {
        a = std::max(g.dom_lo, a - step);
        fa = f(a);
        step *= 2.0;
    }
    step = 1.0 + std::abs(r);
    while (fb < 0.0 && budget-- > 0) {
        b = std::min(g.dom_hi, b + step);
        fb = f(b);
        step *= 2.0;
    }
    if (fa > 0.0 || fb < 0.0) {
        throw NumericalFailure(g.name + ": resolvent bracket expansion failed", r, eps,
                               std::min(std::abs(fa), std::abs(fb)));
    }
    while (budget-- > 0 && b - a > 1e-12 * (1.0 + std::abs(a) + std::abs(b))) {
        const double m = 0.5 * (a + b);
        if (f(m) < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    double x = 0.5 * (a + b);
    // Snap onto a jump sitting inside the final bracket.
    for (const GraphJump& j : g.jumps) {
        if (j.s >= a - kJumpTol && j.s <= b + kJumpTol && r >= j.s + eps * j.lo - 1e-9 &&
            r <= j.s + eps * j.hi + 1e-9) {
            return j.s;
        }
    }
    const GraphInterval iv = g.values_at(x);
    const double resid =
        std::max({0.0, (x + eps * iv.lo) - r, r - (x + eps * iv.hi)});
    if (resid > 1e-9 * (1.0 + std::abs(r))) {
        throw NumericalFailure(g.name + ": resolvent did not converge", r, eps, resid);
    }
    return x;
}

double yosida(const ScalarGraph& g, double eps, double r) {
    if (!(eps > 0.0)) throw ParameterError("yosida: eps must be positive");
    if (g.yosida_cf) return g.yosida_cf(eps, r);
    return (r - resolvent(g, eps, r)) / eps;
}

double yosida_truncated(const ScalarGraph& g, double eps, double r) {
    return std::clamp(yosida(g, eps, r), -1.0 / eps, 1.0 / eps);
}

double potential(const ScalarGraph& g, double r) {
    if (g.potential_cf) return g.potential_cf(r);
    if (!g.in_domain(r)) return kInf;
    std::vector<double> splits;
    for (const GraphJump& j : g.jumps) splits.push_back(j.s);
    const auto sel = [&](double s) { return minimal_section(g, s); };
    return adaptive_simpson(sel, 0.0, r, splits, 1e-10);
}

double conjugate(const ScalarGraph& g, double y) {
    if (g.conjugate_cf) return g.conjugate_cf(y);

    const auto objective = [&](double s) { return y * s - potential(g, s); };

    // Grow the bracket until the objective decreases at both ends; persistent
    // growth means the supremum is +inf.
    double radius = 1.0;
    while (radius <= 1e8) {
        const double lo = std::max(g.dom_lo, -radius);
        const double hi = std::min(g.dom_hi, radius);
        const bool grows_right = hi < g.dom_hi && objective(hi) > objective(0.5 * hi);
        const bool grows_left = lo > g.dom_lo && objective(lo) > objective(0.5 * lo);
        if (!grows_right && !grows_left) {
            // Golden-section maximization; the objective is concave.
            constexpr double phi = 0.6180339887498949;
            double a = lo;
            double b = hi;
            double c = b - phi * (b - a);
            double d = a + phi * (b - a);
            double fc = objective(c);
            double fd = objective(d);
            for (int it = 0; it < 200 && b - a > 1e-10 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
                if (fc > fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    fc = objective(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    fd = objective(d);
                }
            }
            return std::max(0.0, objective(0.5 * (a + b)));
        }
        radius *= 4.0;
    }
    return kInf;
}

double moreau_potential(const ScalarGraph& g, double eps, double r) {
    const double x = resolvent(g, eps, r);
    const double ys = (r - x) / eps;
    return 0.5 * eps * ys * ys + potential(g, x);
}

ScalarGraph shift_normalize(const ScalarGraph& g, double r0, double y0) {
    const GraphInterval iv = g.values_at(r0);
    if (y0 < iv.lo - 1e-12 || y0 > iv.hi + 1e-12) {
        throw ParameterError(g.name + ": shift anchor y0 not in gamma(r0)");
    }
    ScalarGraph out;
    out.name = g.name + "_shifted";
    out.strong_monotonicity = g.strong_monotonicity;
    out.lipschitz = g.lipschitz;
    out.dom_lo = g.dom_lo - r0;
    out.dom_hi = g.dom_hi - r0;
    for (const GraphBranch& b : g.branches) {
        std::function<double(double)> base = b.value;
        out.branches.push_back({b.lo - r0, b.hi - r0,
                                [base, r0, y0](double r) { return base(r + r0) - y0; }});
    }
    for (const GraphJump& j : g.jumps) {
        out.jumps.push_back({j.s - r0, j.lo - y0, j.hi - y0});
    }
    if (g.potential_cf) {
        auto pot = g.potential_cf;
        const double p0 = pot(r0);
        out.potential_cf = [pot, r0, y0, p0](double r) { return pot(r + r0) - p0 - y0 * r; };
    }
    if (g.resolvent_cf) {
        auto res = g.resolvent_cf;
        out.resolvent_cf = [res, r0, y0](double eps, double r) {
            return res(eps, r + r0 + eps * y0) - r0;
        };
    }
    if (g.yosida_cf) {
        auto yos = g.yosida_cf;
        out.yosida_cf = [yos, r0, y0](double eps, double r) {
            return yos(eps, r + r0 + eps * y0) - y0;
        };
    }
    return out;
}

ScalarGraph make_identity() {
    ScalarGraph g;
    g.name = "identity";
    g.branches.push_back({-kInf, kInf, [](double r) { return r; }});
    g.strong_monotonicity = 1.0;
    g.lipschitz = 1.0;
    g.resolvent_cf = [](double eps, double r) { return r / (1.0 + eps); };
    g.yosida_cf = [](double eps, double r) { return r / (1.0 + eps); };
    g.potential_cf = [](double r) { return 0.5 * r * r; };
    g.conjugate_cf = [](double y) { return 0.5 * y * y; };
    return g;
}

ScalarGraph make_zero() {
    ScalarGraph g;
    g.name = "zero";
    g.branches.push_back({-kInf, kInf, [](double) { return 0.0; }});
    g.lipschitz = 0.0;
    g.resolvent_cf = [](double, double r) { return r; };
    g.yosida_cf = [](double, double) { return 0.0; };
    g.potential_cf = [](double) { return 0.0; };
    g.conjugate_cf = [](double y) { return y == 0.0 ? 0.0 : kInf; };
    return g;
}

ScalarGraph make_heaviside() {
    ScalarGraph g;
    g.name = "heaviside";
    g.branches.push_back({-kInf, 0.0, [](double) { return 0.0; }});
    g.branches.push_back({0.0, kInf, [](double) { return 1.0; }});
    g.jumps.push_back({0.0, 0.0, 1.0});
    g.resolvent_cf = [](double eps, double r) {
        if (r < 0.0) return r;
        if (r <= eps) return 0.0;
        return r - eps;
    };
    g.yosida_cf = [](double eps, double r) {
        if (r < 0.0) return 0.0;
        if (r <= eps) return r / eps;
        return 1.0;
    };
    g.potential_cf = [](double r) { return std::max(r, 0.0); };
    g.conjugate_cf = [](double y) { return (y >= 0.0 && y <= 1.0) ? 0.0 : kInf; };
    return g;
}

ScalarGraph make_stefan() {
    ScalarGraph g;
    g.name = "stefan";
    g.branches.push_back({-kInf, 0.0, [](double r) { return r; }});
    g.branches.push_back({0.0, kInf, [](double r) { return r + 1.0; }});
    g.jumps.push_back({0.0, 0.0, 1.0});
    g.strong_monotonicity = 1.0;
    g.resolvent_cf = [](double eps, double r) {
        if (r < 0.0) return r / (1.0 + eps);
        if (r <= eps) return 0.0;
        return (r - eps) / (1.0 + eps);
    };
    g.yosida_cf = [](double eps, double r) {
        if (r < 0.0) return r / (1.0 + eps);
        if (r <= eps) return r / eps;
        return (r + 1.0) / (1.0 + eps);
    };
    g.potential_cf = [](double r) { return 0.5 * r * r + std::max(r, 0.0); };
    g.conjugate_cf = [](double y) {
        if (y < 0.0) return 0.5 * y * y;
        if (y <= 1.0) return 0.0;
        return 0.5 * (y - 1.0) * (y - 1.0);
    };
    return g;
}

ScalarGraph make_power(double p) {
    if (!(p > 1.0 && p < 2.0)) throw ParameterError("power graph requires p in (1,2)");
    ScalarGraph g;
    g.name = "power";
    g.branches.push_back(
        {-kInf, kInf, [p](double r) { return r == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(r), p - 1.0), r); }});
    g.potential_cf = [p](double r) { return std::pow(std::abs(r), p) / p; };
    const double pc = p / (p - 1.0);
    g.conjugate_cf = [pc](double y) { return std::pow(std::abs(y), pc) / pc; };
    return g;
}

ScalarGraph make_arctan() {
    ScalarGraph g;
    g.name = "arctan";
    g.branches.push_back({-kInf, kInf, [](double r) { return std::atan(r); }});
    g.lipschitz = 1.0;
    g.potential_cf = [](double r) {
        return r * std::atan(r) - 0.5 * std::log1p(r * r);
    };
    g.conjugate_cf = [](double y) {
        if (std::abs(y) >= M_PI_2) return kInf;
        return -std::log(std::cos(y));
    };
    return g;
}

ScalarGraph make_piecewise_linear(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw ParameterError("piecewise-linear graph needs at least 2 breakpoints");
    std::stable_sort(pts.begin(), pts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (pts[k + 1].second < pts[k].second - 1e-12) {
            throw ParameterError("piecewise-linear breakpoints are not monotone");
        }
    }
    ScalarGraph g;
    g.name = "piecewise_linear";
    // Repeated abscissae encode jumps.
    std::size_t k = 0;
    std::vector<std::pair<double, double>> knots;  // single-valued anchors
    while (k < pts.size()) {
        std::size_t k2 = k;
        while (k2 + 1 < pts.size() && pts[k2 + 1].first == pts[k].first) ++k2;
        if (k2 > k) g.jumps.push_back({pts[k].first, pts[k].second, pts[k2].second});
        knots.push_back({pts[k].first, pts[k].second});       // left value
        if (k2 > k) knots.push_back({pts[k].first, pts[k2].second});  // right value
        k = k2 + 1;
    }
    // Linear pieces between consecutive knots, constant extension outside.
    const auto seg = [](double x0, double y0, double x1, double y1) {
        return [x0, y0, x1, y1](double r) {
            if (x1 == x0) return y0;
            return y0 + (y1 - y0) * (r - x0) / (x1 - x0);
        };
    };
    g.branches.push_back({-kInf, knots.front().first,
                          [y = knots.front().second](double) { return y; }});
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (knots[i].first == knots[i + 1].first) continue;  // the jump itself
        g.branches.push_back({knots[i].first, knots[i + 1].first,
                              seg(knots[i].first, knots[i].second, knots[i + 1].first,
                                  knots[i + 1].second)});
    }
    g.branches.push_back({knots.back().first, kInf,
                          [y = knots.back().second](double) { return y; }});
    // Normalize so that 0 in gamma(0).
    const GraphInterval at0 = g.values_at(0.0);
    if (at0.lo > 0.0 || at0.hi < 0.0) {
        const double y0 = at0.lo > 0.0 ? at0.lo : at0.hi;
        return shift_normalize(g, 0.0, y0);
    }
    return g;
}

ScalarGraph built_in(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "identity") return make_identity();
    if (name == "zero") return make_zero();
    if (name == "heaviside") return make_heaviside();
    if (name == "stefan") return make_stefan();
    if (name == "arctan") return make_arctan();
    if (name == "power") {
        const auto it = params.find("p");
        if (it == params.end()) throw ParameterError("power graph requires parameter p");
        return make_power(it->second);
    }
    throw ParameterError("unknown graph preset: " + name);
}

ScalarGraph load_piecewise_linear(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open breakpoint file: " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double r = 0.0;
        double y = 0.0;
        if (!(ss >> r >> y)) {
            throw ConfigError("bad breakpoint line in " + path, lineno);
        }
        pts.emplace_back(r, y);
    }
    return make_piecewise_linear(std::move(pts));
}

}  // namespace fracdnl
