#pragma once

#include <stdexcept>
#include <string>

namespace fracdnl {

// Parameter / construction errors (bad theta, p outside (1,2), ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a graph or potential.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A scalar or modal nonlinear solve did not converge within its budget.
struct NumericalFailure : std::runtime_error {
    NumericalFailure(const std::string& what, double arg, double param, double residual)
        : std::runtime_error(what), arg(arg), param(param), residual(residual) {}
    double arg;
    double param;
    double residual;
};

struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line(line) {}
    int line;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fracdnl
