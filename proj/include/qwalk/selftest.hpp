#pragma once
// Built-in property-test battery behind the `selftest` CLI subcommand.

#include <string>
#include <vector>

namespace qwalk {

struct SelfTestResult {
    std::string name;
    bool passed = false;
    std::string detail; ///< residual magnitudes or failure description
    double seconds = 0.0;
};

/// Run every suite (never throws; failures are reported in the results).
std::vector<SelfTestResult> run_selftest();

} // namespace qwalk
