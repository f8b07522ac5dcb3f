#pragma once

#include <stdexcept>
#include <string>

namespace pnntrain {

// Malformed or unusable input data (bad file contents, inconsistent
// dimensions, empty classes, labels out of range).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Infeasible or contradictory configuration (non-positive sigma or C,
// split sizes exceeding the dataset, unknown kernel family).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised in strict mode when the dual solver hits its iteration cap
// before reaching the requested KKT gap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double gap, long iterations)
        : std::runtime_error(what), kkt_gap(gap), iterations(iterations) {}

    double kkt_gap;
    long iterations;
};

}  // namespace pnntrain
