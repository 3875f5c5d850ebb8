#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccg/distributions.hpp"
#include "ccg/stats.hpp"

namespace ccg::rep {

using Json = nlohmann::ordered_json;

Json spec_json(const dist::DistributionSpec& spec);
Json summary_json(const num::ReplicaSummary& s);

// Accumulates JSON-lines records and CSV tables in emission order and writes
// them below an output directory. Emission happens only on the orchestration
// thread, so the bytes are a pure function of the computed values.
class ReportWriter {
  public:
    explicit ReportWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void record(const Json& j) { lines_.push_back(j.dump()); }

    void csv(const std::string& name, const std::string& header,
             const std::vector<std::string>& rows);

    // all JSON-lines records accumulated so far, newline separated
    std::string jsonl() const;

    void write_jsonl(const std::string& name) const;
    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
    std::vector<std::string> lines_;
};

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace ccg::rep
