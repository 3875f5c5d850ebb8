#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ccg/config.hpp"

namespace ccg::accept {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // measured vs required, human readable
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    std::string jsonl;  // the full deterministic report stream
    bool all_pass = false;
};

// Criteria 1..12 (every numeric record lands in the returned jsonl stream).
SuiteResult run_criteria(std::uint64_t seed, int workers);

// Full suite: criteria 1..12 once at `workers`, then the determinism
// criterion re-runs them at one worker and compares report bytes. Prints one
// line per criterion, writes acceptance.jsonl under out_dir.
SuiteResult run_suite(std::uint64_t seed, int workers,
                      const std::string& out_dir, std::ostream& log);

}  // namespace ccg::accept

namespace ccg::cli {
int run_acceptance_cli(const ExperimentConfig& cfg, std::ostream& log);
}
