#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace isg::validation {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

struct Options {
    std::uint64_t master_seed = 20111;
    int workers = 1;
};

std::vector<int> all_criteria();

/// Run one numbered cross-validation criterion.
CriterionResult run_criterion(int number, const Options& opts);

/// Run the given criteria (all when empty), streaming one result line each to
/// `progress` when non-null.
std::vector<CriterionResult> run(const std::vector<int>& numbers, const Options& opts,
                                 std::ostream* progress = nullptr);

/// "[PASS] 3. fading-invariance ..." style line.
std::string format_line(const CriterionResult& r);

}  // namespace isg::validation
