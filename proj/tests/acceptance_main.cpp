// Runs every acceptance suite and prints one pass/fail line per criterion.
#include <cstdio>

#include "realign/bench.hpp"

int main() {
    using namespace realign::bench;
    std::vector<SuiteResult> results = run_suites({});
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::printf("criterion %2d %s %-28s %s [%s] (%.1f ms)\n", r.criterion,
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                    r.tolerance.c_str(), r.elapsed_ms);
        std::fflush(stdout);
    }
    std::printf(all_pass ? "acceptance: all criteria PASS\n"
                         : "acceptance: FAILURES present\n");
    return all_pass ? 0 : 1;
}
