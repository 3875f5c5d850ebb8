#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ccg/config.hpp"
#include "ccg/report.hpp"

namespace ccg::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_budget_exhausted = 3;

struct ExperimentInfo {
    std::string name;         // subcommand
    std::string description;  // one line
    std::string keys;         // required/accepted config keys
    std::string operations;   // library operations exercised
};

const std::vector<ExperimentInfo>& experiment_catalog();

// Stable, human-readable catalog; every library operation appears exactly
// once across the `operations` columns.
std::string list_experiments();

// Dispatch by subcommand name; returns the process exit code.
int run_experiment(const std::string& name, const ExperimentConfig& cfg,
                   std::ostream& log);

}  // namespace ccg::cli
