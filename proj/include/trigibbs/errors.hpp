#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trigibbs {

// Instance exceeds a hard enumeration limit (exact ops, cut ops).
struct SizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Streaming enumeration exceeded its configured work budget.
struct BudgetError : std::runtime_error {
    std::int64_t reached;
    BudgetError(const std::string& msg, std::int64_t count)
        : std::runtime_error(msg), reached(count) {}
};

// Query lies outside the validity window of an asymptotic formula.
struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

// Scan found no sign change for a crossing search.
struct NoCrossingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (lambda, zeta) outside the certified convergence region of the series.
struct OutOfRegionError : std::runtime_error {
    double gamma_infimum;
    OutOfRegionError(const std::string& msg, double g)
        : std::runtime_error(msg), gamma_infimum(g) {}
};

// Invalid experiment configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace trigibbs
