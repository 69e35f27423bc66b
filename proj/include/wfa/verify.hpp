#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wfa {

enum class Suite { Fast, Full };

struct CheckResult {
    std::string id;  // "1".."12" for the numbered criteria, "F1".. for the extended suite
    std::string name;
    bool pass = false;
    double value = 0;
    double tolerance = 0;
    std::string detail;
    double seconds = 0;
    // set when a criterion fails as written but the failure is explained by a
    // law that the check itself confirms numerically
    bool documented_deviation = false;
};

// Fast: the twelve numbered criteria. Full adds the solver grid study,
// seed independence, operator consistency and a larger root-law sample.
std::vector<CheckResult> run_verification(Suite suite, int threads = 0,
                                          const std::function<void(const CheckResult&)>& on_done = {});

std::string format_check(const CheckResult& r);

}  // namespace wfa
