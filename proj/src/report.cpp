#include "ccg/report.hpp"

#include <fstream>

namespace ccg::rep {

Json spec_json(const dist::DistributionSpec& spec) {
    Json j;
    for (const auto& [k, v] : spec.kv()) j[k] = v;
    return j;
}

Json summary_json(const num::ReplicaSummary& s) {
    return Json{{"mean", s.mean},
                {"stderr", s.stderr_},
                {"ci_lo", s.lo},
                {"ci_hi", s.hi},
                {"replicas", s.count}};
}

void ReportWriter::csv(const std::string& name, const std::string& header,
                       const std::vector<std::string>& rows) {
    std::filesystem::create_directories(dir_);
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out)
        throw std::runtime_error("report: cannot write " + (dir_ / name).string());
    out << header << "\n";
    for (const auto& r : rows) out << r << "\n";
}

std::string ReportWriter::jsonl() const {
    std::string all;
    for (const auto& l : lines_) {
        all += l;
        all += "\n";
    }
    return all;
}

void ReportWriter::write_jsonl(const std::string& name) const {
    std::filesystem::create_directories(dir_);
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out)
        throw std::runtime_error("report: cannot write " + (dir_ / name).string());
    out << jsonl();
}

std::string format_double(double v) { return Json(v).dump(); }

}  // namespace ccg::rep
