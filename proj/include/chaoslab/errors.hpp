#pragma once

#include <stdexcept>
#include <string>

namespace chaoslab {

/// Malformed or out-of-contract arguments (non-finite entries, bad symbols,
/// singular generators, alphabet mismatches).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An enumeration or iteration would exceed its configured budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative numerical method stopped at its iteration cap without
/// meeting its acceptance test. Carries the last residual seen.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace chaoslab
