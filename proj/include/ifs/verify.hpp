#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ifs {

struct CaseResult {
    std::string id;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

// Theorem-backed invariant suites. Each case draws from its own generator
// seeded seed + a stable ordinal, so results are deterministic for a given
// seed at any worker count; cases fan out across workers and come back
// sorted by case id.
std::vector<CaseResult> verify_metrics(std::uint64_t seed);
std::vector<CaseResult> verify_shift(std::uint64_t seed);
std::vector<CaseResult> verify_periodic(std::uint64_t seed);
std::vector<CaseResult> verify_dimension(std::uint64_t seed);
std::vector<CaseResult> verify_osc(std::uint64_t seed);

// suite: one of all|metrics|shift|periodic|dimension|osc.
std::vector<CaseResult> verify_suite(const std::string& suite, std::uint64_t seed);

bool all_pass(const std::vector<CaseResult>& results);

// Header `case,status,measured,bound,detail`; rows already sorted by id.
std::string results_to_csv(const std::vector<CaseResult>& results);

}  // namespace ifs
