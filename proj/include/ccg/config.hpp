#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccg/distributions.hpp"

namespace ccg::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plain key-value experiment configuration: one "key = value" per line,
// '#' comments, dotted prefixes as sections. Unknown keys are rejected
// against the schema of the experiment being run; the seed is mandatory.
class ExperimentConfig {
  public:
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig empty();

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key,
                           const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    long get_long(const std::string& key, long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::uint64_t require_seed() const;

    // comma-separated numeric list; must be non-empty and sorted ascending
    std::vector<double> get_grid(const std::string& key,
                                 const std::vector<double>& fallback) const;
    std::vector<long> get_dims(const std::string& key,
                               const std::vector<long>& fallback) const;

    // Builds the distribution spec from family/n/isotropic/p/r/gauge/body/
    // walk_budget keys.
    dist::DistributionSpec spec() const;

    // Throws ConfigError when a stored key is not in the allowed set.
    void check_allowed(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

// Keys shared by every experiment.
const std::set<std::string>& common_keys();

}  // namespace ccg::cli
