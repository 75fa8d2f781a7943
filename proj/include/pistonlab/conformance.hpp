#pragma once

#include <string>
#include <vector>

namespace pistonlab {

/// One conformance check: a named claim, the measured and expected values,
/// the tolerance it ran at, and the verdict.
struct CheckResult {
    std::string id;
    std::string description;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    double discrepancy = 0.0;
    bool passed = false;
    std::string detail;
};

struct ConformanceOptions {
    bool include_3d = true;   // the box checks take minutes; everything else is seconds
    int threads = 0;          // 0 = hardware concurrency
};

/// Runs the full verification matrix: every closed-form value, force law,
/// duality identity, and 3-D limit, each at its pinned tolerance.
[[nodiscard]] std::vector<CheckResult> run_conformance_suite(const ConformanceOptions& options = {});

[[nodiscard]] bool all_passed(const std::vector<CheckResult>& results);

} // namespace pistonlab
