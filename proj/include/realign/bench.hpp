#pragma once

#include <functional>
#include <string>
#include <vector>

namespace realign::bench {

struct SuiteOptions {
    // test hook: flips the sign of the gradient under check so the harness
    // itself can be validated
    bool flip_gw_gradient_sign = false;
};

struct SuiteResult {
    std::string name;
    int criterion = 0;
    bool pass = false;
    std::string detail;      // measured values vs thresholds
    std::string tolerance;   // the pinned threshold(s)
    double elapsed_ms = 0.0;
};

struct Suite {
    std::string name;
    int criterion;
    std::function<SuiteResult(const SuiteOptions&)> run;
};

/// All acceptance suites in criterion order.
const std::vector<Suite>& all_suites();

/// Runs the named suites (all when `names` is empty); results in suite order.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names,
                                    const SuiteOptions& opts = {});

}  // namespace realign::bench
