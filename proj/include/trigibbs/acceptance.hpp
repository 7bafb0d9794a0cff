#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace trigibbs::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool informational = false;  // NOTE entries: reported, never counted as failures
    std::string detail;
    double seconds = 0.0;
};

// Runs criterion `id` (1..10) and prints its PASS/FAIL line to `out`.
// Tolerances are pinned inside; failures are reported, never retried.
CriterionResult run_criterion(int id, std::uint64_t seed, std::ostream& out);

// All criteria in order.
std::vector<CriterionResult> run_all(std::uint64_t seed, std::ostream& out);

// True when every non-informational criterion passed.
bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace trigibbs::acceptance
