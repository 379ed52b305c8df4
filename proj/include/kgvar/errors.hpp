#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgv {

// Invalid arguments: shape mismatches, out-of-range axes, bad parameters.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Gram matrix of the tangent basis is singular at some grid point,
// violating the linear-independence assumption.
class DegenerateMetricError : public std::runtime_error {
public:
    DegenerateMetricError(const std::string& what, std::size_t point)
        : std::runtime_error(what), point_(point) {}
    std::size_t point() const { return point_; }

private:
    std::size_t point_;
};

// |v| >= c somewhere; sqrt(1 - v^2/c^2) is undefined.
class SuperluminalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative eigensolve did not reach the residual tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Spatial Jacobian of the position field is singular at some point, so the
// chain rule to physical coordinates cannot be applied there.
class ChainRuleError : public std::runtime_error {
public:
    ChainRuleError(const std::string& what, std::size_t point)
        : std::runtime_error(what), point_(point) {}
    std::size_t point() const { return point_; }

private:
    std::size_t point_;
};

} // namespace kgv
