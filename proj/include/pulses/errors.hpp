// Error taxonomy shared across the library. The CLI maps these to exit codes:
// usage_error -> 1, domain/numeric errors -> 2, io_error -> 3.
#pragma once

#include <stdexcept>
#include <string>

namespace pulses {

/// Caller passed arguments that violate an operation's contract
/// (bad flag, unknown method tag, missing config key, ...).
struct usage_error : std::invalid_argument {
    explicit usage_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure during evaluation (singular curvature, degenerate
/// curve, non-finite sample, no convergence).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File could not be read or written.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pulses
