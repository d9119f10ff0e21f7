#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracdnl {

// A closed interval of graph values at a point.
struct GraphInterval {
    double lo;
    double hi;
};

// One smooth monotone piece of a scalar graph on [lo, hi].
struct GraphBranch {
    double lo;
    double hi;
    std::function<double(double)> value;
};

// Multivalued point: gamma(s) = [lo, hi].
struct GraphJump {
    double s;
    double lo;
    double hi;
};

// Scalar maximal monotone graph with 0 in gamma(0).
//
// Branches and jumps are ordered and together cover the domain
// [dom_lo, dom_hi]. Closed-form resolvent / potential / conjugate may be
// registered by the constructors; generic numeric fallbacks are used
// otherwise.
struct ScalarGraph {
    std::string name;
    std::vector<GraphBranch> branches;
    std::vector<GraphJump> jumps;

    std::optional<double> strong_monotonicity;  // C_gamma
    std::optional<double> lipschitz;            // Lambda_gamma

    std::function<double(double /*eps*/, double /*r*/)> resolvent_cf;
    // Closed-form Yosida map; avoids the cancellation in (r - J_eps r)/eps
    // when eps is tiny.
    std::function<double(double /*eps*/, double /*r*/)> yosida_cf;
    std::function<double(double)> potential_cf;
    std::function<double(double)> conjugate_cf;

    double dom_lo = -std::numeric_limits<double>::infinity();
    double dom_hi = std::numeric_limits<double>::infinity();

    bool in_domain(double r) const { return r >= dom_lo && r <= dom_hi; }

    // gamma(r) as a closed interval; throws DomainError outside the domain.
    GraphInterval values_at(double r) const;
};

// (id + eps*gamma)^{-1}(r). Total on R; nonexpansive in r.
double resolvent(const ScalarGraph& g, double eps, double r);

// Yosida approximation (r - resolvent(r)) / eps.
double yosida(const ScalarGraph& g, double eps, double r);

// Yosida clamped to [-1/eps, 1/eps].
double yosida_truncated(const ScalarGraph& g, double eps, double r);

// gamma°(r): element of gamma(r) nearest zero.
double minimal_section(const ScalarGraph& g, double r);

// Convex primitive gamma-hat with gamma-hat(0) = 0 = min. Returns +inf
// outside the effective domain.
double potential(const ScalarGraph& g, double r);

// Legendre-Fenchel conjugate of the potential; +inf is returned as an
// explicit infinite marker, never thrown.
double conjugate(const ScalarGraph& g, double y);

// Potential of the Yosida-regularized graph (Moreau envelope of gamma-hat):
// eps/2 * yosida(r)^2 + gamma-hat(resolvent(r)).
double moreau_potential(const ScalarGraph& g, double eps, double r);

// Shifted graph r -> gamma(r + r0) - y0 with 0 in the image of 0.
// Requires y0 in gamma(r0).
ScalarGraph shift_normalize(const ScalarGraph& g, double r0, double y0);

// Built-in graphs.
ScalarGraph make_identity();
ScalarGraph make_zero();
ScalarGraph make_heaviside();
ScalarGraph make_stefan();            // id + Heaviside
ScalarGraph make_power(double p);     // r -> |r|^{p-2} r, p in (1,2)
ScalarGraph make_arctan();
ScalarGraph make_piecewise_linear(std::vector<std::pair<double, double>> breakpoints);

// Name + parameter-map constructor used by the config front end.
ScalarGraph built_in(const std::string& name, const std::map<std::string, double>& params = {});

// Two-column breakpoint text format (r, gamma(r)); repeated r encodes a jump.
ScalarGraph load_piecewise_linear(const std::string& path);

}  // namespace fracdnl
