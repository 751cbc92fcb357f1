#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ksexact {

struct CheckGroupResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;      // largest measured residual in the group
    double threshold = 0.0;  // its acceptance bound
};

struct SelfcheckOptions {
    // Name of a group whose measured residual is inflated so the failure
    // path can be exercised. Empty means no fault.
    std::string inject_fault;
};

std::vector<CheckGroupResult> run_selfcheck(const SelfcheckOptions& opts = {});

// Prints one PASS/FAIL line per group; returns 0 iff every group passed.
int report_selfcheck(const std::vector<CheckGroupResult>& results, std::ostream& out);

}  // namespace ksexact
