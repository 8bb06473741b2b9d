#pragma once

#include <stdexcept>
#include <string>

namespace sfp {

/// Raised when an argument violates an operation's precondition
/// (dimension mismatch, out-of-range parameter, malformed definition).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative routine ran out of iterations. Carries the last estimate.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double last_estimate)
        : std::runtime_error(what), last_estimate_(last_estimate) {}

    double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

} // namespace sfp
